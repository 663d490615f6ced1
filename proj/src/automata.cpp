#include "kbsc/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace kbsc {

std::optional<EventId> PlantSpec::find_event(std::string_view name) const {
  auto it = event_lookup_.find(std::string(name));
  if (it == event_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<StateId> PlantSpec::find_state(std::string_view name) const {
  auto it = state_lookup_.find(std::string(name));
  if (it == state_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<EventId> PlantSpec::events() const {
  std::vector<EventId> out;
  for (std::size_t e = 0; e < event_count(); ++e) out.push_back(EventId(e));
  return out;
}

std::vector<StateId> PlantSpec::states() const {
  std::vector<StateId> out;
  for (std::size_t q = 0; q < state_count(); ++q) out.push_back(StateId(q));
  return out;
}

std::string PlantSpec::format(const EventString& s) const {
  if (s.empty()) return "ε";
  std::string out;
  for (EventId e : s) {
    if (!out.empty()) out += ' ';
    out += name(e);
  }
  return out;
}

// --- PlantBuilder -----------------------------------------------------------

EventId PlantBuilder::add_event(std::string name, SourceLocation where) {
  if (name.empty()) throw ModelError("event name must be nonempty", where);
  if (event_lookup_.contains(name)) throw ModelError("duplicate event '" + name + "'", where);
  EventId id = event_id(events_.size());
  event_lookup_.emplace(name, id);
  events_.push_back(std::move(name));
  return id;
}

StateId PlantBuilder::add_state(std::string name, bool legal, SourceLocation where) {
  if (name.empty()) throw ModelError("state name must be nonempty", where);
  if (state_lookup_.contains(name)) throw ModelError("duplicate state '" + name + "'", where);
  StateId id = state_id(states_.size());
  state_lookup_.emplace(name, id);
  states_.emplace_back(std::move(name), legal);
  state_where_.push_back(where);
  return id;
}

void PlantBuilder::set_initial(StateId q, SourceLocation where) {
  if (initial_ && *initial_ != q)
    throw ModelError("more than one initial state ('" + states_[index(*initial_)].first +
                         "' and '" + states_[index(q)].first + "')",
                     where);
  initial_ = q;
}

void PlantBuilder::add_transition(StateId from, EventId e, StateId to, bool legal,
                                  SourceLocation where) {
  for (const auto& t : transitions_) {
    if (t.from == from && t.event == e)
      throw ModelError("nondeterministic transition: state '" + states_[index(from)].first +
                           "' already has an '" + events_[index(e)] + "' transition",
                       where);
  }
  transitions_.push_back({from, e, to, legal, where});
}

std::optional<EventId> PlantBuilder::find_event(std::string_view name) const {
  auto it = event_lookup_.find(std::string(name));
  if (it == event_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<StateId> PlantBuilder::find_state(std::string_view name) const {
  auto it = state_lookup_.find(std::string(name));
  if (it == state_lookup_.end()) return std::nullopt;
  return it->second;
}

PlantSpec PlantBuilder::build() const {
  if (states_.empty()) throw ModelError("model has no states");
  if (!initial_) throw ModelError("model has no initial state");
  if (!states_[index(*initial_)].second)
    throw ModelError("initial state '" + states_[index(*initial_)].first + "' must be legal",
                     state_where_[index(*initial_)]);

  PlantSpec m;
  m.event_names_ = events_;
  m.event_lookup_ = event_lookup_;
  m.state_lookup_ = state_lookup_;
  for (const auto& [name, legal] : states_) {
    m.state_names_.push_back(name);
    m.legal_.push_back(legal);
  }
  m.initial_ = *initial_;
  m.delta_.assign(m.state_count() * m.event_count(), std::nullopt);
  for (const auto& t : transitions_) {
    if (t.legal && (!m.legal_[index(t.from)] || !m.legal_[index(t.to)]))
      throw ModelError("legal transition '" + m.name(t.from) + " " + m.name(t.event) + " " +
                           m.name(t.to) + "' must connect legal states",
                       t.where);
    m.delta_[index(t.from) * m.event_count() + index(t.event)] = Edge{t.to, t.legal};
  }
  m.by_name_ = m.events();
  std::sort(m.by_name_.begin(), m.by_name_.end(),
            [&](EventId a, EventId b) { return m.name(a) < m.name(b); });

  auto live = reachable(m, false);
  for (StateId q : m.states()) {
    if (!live.contains(q))
      throw ModelError("state '" + m.name(q) + "' is unreachable from the initial state",
                       state_where_[index(q)]);
  }
  return m;
}

// --- SupervisionProfile -----------------------------------------------------

SupervisionProfile::SupervisionProfile(std::size_t supervisors, std::size_t events)
    : n_(supervisors),
      events_(events),
      observable_(supervisors, std::vector<bool>(events, false)),
      controllable_(supervisors, std::vector<bool>(events, false)) {
  if (supervisors == 0) throw ModelError("at least one supervisor is required");
}

void SupervisionProfile::set_observable(std::size_t i, EventId e, bool on) {
  observable_.at(i).at(index(e)) = on;
}

void SupervisionProfile::set_controllable(std::size_t i, EventId e, bool on) {
  controllable_.at(i).at(index(e)) = on;
}

bool SupervisionProfile::controllable(EventId e) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (controls(i, e)) return true;
  return false;
}

bool SupervisionProfile::observable(EventId e) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (observes(i, e)) return true;
  return false;
}

std::vector<std::size_t> SupervisionProfile::controllers(EventId e) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (controls(i, e)) out.push_back(i);
  return out;
}

// --- operations -------------------------------------------------------------

std::set<StateId> reachable(const PlantSpec& model, bool legal_only) {
  std::set<StateId> seen{model.initial()};
  std::deque<StateId> queue{model.initial()};
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (EventId e : model.events()) {
      auto edge = model.step(q, e);
      if (!edge || (legal_only && !edge->legal)) continue;
      if (seen.insert(edge->target).second) queue.push_back(edge->target);
    }
  }
  return seen;
}

Dfa to_dfa(const PlantSpec& model, bool legal_only) {
  Dfa d;
  for (EventId e : model.events()) d.alphabet.push_back(model.name(e));
  d.initial = index(model.initial());
  d.next.assign(model.state_count(), std::vector<std::optional<std::size_t>>(model.event_count()));
  for (StateId q : model.states()) {
    for (EventId e : model.events()) {
      auto edge = model.step(q, e);
      if (edge && (!legal_only || edge->legal)) d.next[index(q)][index(e)] = index(edge->target);
    }
  }
  return d;
}

std::set<EventString> language_upto(const PlantSpec& model, std::size_t k, bool legal_only,
                                    std::size_t bound) {
  if (k > bound)
    throw BoundError("string length " + std::to_string(k) + " exceeds enumeration bound " +
                     std::to_string(bound));
  std::set<EventString> out;
  std::vector<std::pair<EventString, StateId>> frontier{{{}, model.initial()}};
  out.insert(EventString{});
  for (std::size_t len = 0; len < k && !frontier.empty(); ++len) {
    std::vector<std::pair<EventString, StateId>> next;
    for (const auto& [s, q] : frontier) {
      for (EventId e : model.events()) {
        auto edge = model.step(q, e);
        if (!edge || (legal_only && !edge->legal)) continue;
        EventString t = s;
        t.push_back(e);
        out.insert(t);
        next.emplace_back(std::move(t), edge->target);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

Equivalence dfa_equivalent(const Dfa& a, const Dfa& b) {
  if (a.alphabet.size() != b.alphabet.size())
    throw AlphabetMismatch("automata have alphabets of different sizes");
  // Walk events by name; map each name to its column in both automata.
  std::map<std::string, std::pair<std::size_t, std::size_t>> columns;
  for (std::size_t e = 0; e < a.alphabet.size(); ++e) columns[a.alphabet[e]].first = e;
  for (std::size_t e = 0; e < b.alphabet.size(); ++e) {
    auto it = columns.find(b.alphabet[e]);
    if (it == columns.end())
      throw AlphabetMismatch("event '" + b.alphabet[e] + "' is not in both alphabets");
    it->second.second = e;
  }
  if (columns.size() != a.alphabet.size()) throw AlphabetMismatch("duplicate event names");

  using Pair = std::pair<std::size_t, std::size_t>;
  std::map<Pair, std::pair<Pair, std::string>> parent;
  Pair start{a.initial, b.initial};
  parent[start] = {start, ""};
  std::deque<Pair> queue{start};

  auto path_to = [&](Pair p) {
    std::vector<std::string> s;
    while (p != start) {
      auto& [prev, ev] = parent[p];
      s.push_back(ev);
      p = prev;
    }
    std::reverse(s.begin(), s.end());
    return s;
  };

  while (!queue.empty()) {
    Pair p = queue.front();
    queue.pop_front();
    for (const auto& [ev, col] : columns) {
      auto na = a.next[p.first][col.first];
      auto nb = b.next[p.second][col.second];
      if (na.has_value() != nb.has_value()) {
        auto s = path_to(p);
        s.push_back(ev);
        return {false, s};
      }
      if (!na) continue;
      Pair q{*na, *nb};
      if (parent.emplace(q, std::make_pair(p, ev)).second) queue.push_back(q);
    }
  }
  return {true, {}};
}

bool shortlex_less(const PlantSpec& model, const EventString& a, const EventString& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == b[k]) continue;
    return model.name(a[k]) < model.name(b[k]);
  }
  return false;
}

}  // namespace kbsc
