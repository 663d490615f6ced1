#include "kbsc/synthesis.hpp"

#include <array>
#include <deque>

namespace kbsc {

namespace {

constexpr std::array<std::pair<PolicyCase, std::string_view>, 8> kCaseNames{{
    {PolicyCase::knows_enable, "knows-enable"},
    {PolicyCase::knows_disable, "knows-disable"},
    {PolicyCase::bets_enable, "bets-enable"},
    {PolicyCase::bets_disable, "bets-disable"},
    {PolicyCase::others_cover, "others-cover"},
    {PolicyCase::knows_both, "knows-both"},
    {PolicyCase::no_knowledge, "no-knowledge"},
    {PolicyCase::no_legal_world, "no-legal-world"},
}};

}  // namespace

std::string_view to_string(PolicyCase c) {
  for (const auto& [id, name] : kCaseNames)
    if (id == c) return name;
  return "?";
}

std::optional<PolicyCase> parse_policy_case(std::string_view s) {
  for (const auto& [id, name] : kCaseNames)
    if (name == s) return id;
  return std::nullopt;
}

PolicyEntry policy_from(const KnowledgeTruths& t) {
  using CD = ControlDecision;
  if (t.knows_enable && !t.knows_disable) return {CD::on, PolicyCase::knows_enable};
  if (!t.knows_enable && t.knows_disable) return {CD::off, PolicyCase::knows_disable};
  if (t.knows_enable) return {CD::abstain, PolicyCase::knows_both};
  if (t.disable_covered && !t.enable_covered) return {CD::won, PolicyCase::bets_enable};
  if (t.enable_covered && !t.disable_covered) return {CD::woff, PolicyCase::bets_disable};
  if (t.enable_covered) return {CD::abstain, PolicyCase::others_cover};
  return {CD::abstain, PolicyCase::no_knowledge};
}

const KnowledgeLines& KnowledgeBase::lines(std::size_t i, EventId sigma) {
  auto key = std::make_pair(i, sigma);
  auto it = lines_.find(key);
  if (it == lines_.end()) it = lines_.emplace(key, knowledge_lines(i, sigma)).first;
  return it->second;
}

KnowledgeTruths KnowledgeBase::truths(std::size_t w, std::size_t i, EventId sigma) {
  const KnowledgeLines& k = lines(i, sigma);
  return {
      ev_.truth(k.knows_enable)[w] != 0,
      ev_.truth(k.knows_disable)[w] != 0,
      ev_.truth(k.enable_covered)[w] != 0,
      ev_.truth(k.disable_covered)[w] != 0,
  };
}

ControlDecision kp(const KripkeFrame& frame, std::size_t w, EventId sigma, std::size_t i) {
  KnowledgeBase kb(frame);
  return kb.kp(w, sigma, i).decision;
}

std::vector<PolicyEntry> project_policy(KnowledgeBase& kb, std::size_t i, EventId sigma) {
  const KripkeFrame& frame = kb.frame();
  const Observer& obs = frame.composite().observers.at(i);
  std::vector<std::optional<PolicyEntry>> seen(obs.states.size());
  for (std::size_t w : frame.legal_worlds()) {
    std::size_t state = frame.composite().worlds[w].estimates[i];
    PolicyEntry entry = kb.kp(w, sigma, i);
    if (!seen[state]) {
      seen[state] = entry;
    } else if (seen[state]->decision != entry.decision) {
      throw PolicyAmbiguity("supervisor " + std::to_string(i + 1) + " has two decisions for " +
                            frame.model().name(sigma) + " at one estimate (" +
                            std::string(to_string(seen[state]->decision)) + ", " +
                            std::string(to_string(entry.decision)) + ")");
    }
  }
  std::vector<PolicyEntry> out;
  for (const auto& s : seen)
    out.push_back(s.value_or(PolicyEntry{ControlDecision::abstain, PolicyCase::no_legal_world}));
  return out;
}

ControlDecision Supervisor::decision(std::size_t state, EventId sigma) const {
  if (state < table.size()) {
    auto it = table[state].find(sigma);
    if (it != table[state].end()) return it->second;
  }
  throw Error("supervisor " + std::to_string(index + 1) + " has no decision for event #" +
              std::to_string(kbsc::index(sigma)) + " at observer state " + std::to_string(state));
}

SynthesisResult synthesize(const KripkeFrame& frame) {
  Verdict ctrl = check_controllability(frame);
  if (!ctrl.holds) throw NotControllable(std::move(ctrl));
  Verdict obs = check_inf_obs_extended(frame);
  if (!obs.holds) throw NotInferenceObservable(std::move(obs));

  KnowledgeBase kb(frame);
  SynthesisResult result;
  result.defaults = obs.defaults;
  for (std::size_t i = 0; i < frame.agents(); ++i) {
    Supervisor sup;
    sup.index = i;
    sup.observer = frame.composite().observers[i];
    sup.table.resize(sup.observer.states.size());
    sup.provenance.resize(sup.observer.states.size());
    for (EventId sigma : frame.model().events_by_name()) {
      if (!frame.profile().controls(i, sigma)) continue;
      auto entries = project_policy(kb, i, sigma);
      for (std::size_t s = 0; s < entries.size(); ++s) {
        sup.table[s][sigma] = entries[s].decision;
        sup.provenance[s][sigma] = entries[s].why;
      }
    }
    result.supervisors.push_back(std::move(sup));
  }
  return result;
}

SynthesisResult synthesize(const PlantSpec& model, const SupervisionProfile& profile) {
  return synthesize(build_frame(model, profile));
}

DecisionBag decision_bag(const SynthesisResult& result, const SupervisionProfile& profile,
                         const std::vector<std::size_t>& observer_states, EventId sigma) {
  DecisionBag bag;
  for (std::size_t i : profile.controllers(sigma))
    bag.push_back(result.supervisors.at(i).decision(observer_states.at(i), sigma));
  return bag;
}

bool allowed(const SynthesisResult& result, const SupervisionProfile& profile,
             const std::vector<std::size_t>& observer_states, EventId sigma) {
  if (!profile.controllable(sigma)) return true;
  auto it = result.defaults.find(sigma);
  FusedDecision dft = it == result.defaults.end() ? FusedDecision::enable : it->second;
  return fuse(decision_bag(result, profile, observer_states, sigma), dft) == FusedDecision::enable;
}

Dfa closed_loop(const PlantSpec& model, const SupervisionProfile& profile,
                const SynthesisResult& result) {
  if (result.supervisors.size() != profile.supervisors())
    throw Error("expected " + std::to_string(profile.supervisors()) + " supervisors, got " +
                std::to_string(result.supervisors.size()));

  struct Node {
    StateId plant;
    std::vector<std::size_t> obs;
    auto operator<=>(const Node&) const = default;
  };

  auto events = model.events();
  Dfa out;
  for (EventId e : events) out.alphabet.push_back(model.name(e));

  std::map<Node, std::size_t> ids;
  std::deque<Node> queue;
  Node start{model.initial(), std::vector<std::size_t>(profile.supervisors(), 0)};
  ids.emplace(start, 0);
  out.next.emplace_back(events.size());
  queue.push_back(start);

  while (!queue.empty()) {
    Node cur = queue.front();
    queue.pop_front();
    std::size_t from = ids.at(cur);
    for (EventId e : events) {
      auto edge = model.step(cur.plant, e);
      if (!edge || !allowed(result, profile, cur.obs, e)) continue;
      Node nxt{edge->target, cur.obs};
      for (std::size_t i = 0; i < profile.supervisors(); ++i) {
        if (!profile.observes(i, e)) continue;
        auto s = result.supervisors[i].observer.step(cur.obs[i], e);
        if (!s) throw Error("observer of supervisor " + std::to_string(i + 1) + " cannot follow " + model.name(e));
        nxt.obs[i] = *s;
      }
      auto [it, fresh] = ids.emplace(nxt, out.next.size());
      if (fresh) {
        out.next.emplace_back(events.size());
        queue.push_back(nxt);
      }
      out.next[from][index(e)] = it->second;
    }
  }
  return out;
}

Equivalence verify_solution(const PlantSpec& model, const SupervisionProfile& profile,
                            const SynthesisResult& result) {
  return dfa_equivalent(closed_loop(model, profile, result), to_dfa(model, true));
}

}  // namespace kbsc
