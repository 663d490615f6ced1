#include "kbsc/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace kbsc {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::uncontrollable_exit:
      return "uncontrollable event leaves the legal language";
    case Violation::legal_disabled:
      return "legal continuation disabled";
    case Violation::illegal_enabled:
      return "illegal continuation enabled";
    case Violation::fusion_error:
      return "decisions cannot be fused";
  }
  return "?";
}

// --- solvability at string level ---------------------------------------------

namespace {

std::vector<EventString> legal_strings_shortlex(const PlantSpec& model, std::size_t k) {
  auto set = language_upto(model, k, true, kOracleDepthBound);
  std::vector<EventString> out(set.begin(), set.end());
  std::sort(out.begin(), out.end(),
            [&](const EventString& a, const EventString& b) { return shortlex_less(model, a, b); });
  return out;
}

StateId run_plant(const PlantSpec& model, const EventString& s) {
  StateId q = model.initial();
  for (EventId e : s) q = model.step(q, e).value().target;
  return q;
}

// Observer state reached by P_i(s).
std::size_t run_observer(const Observer& obs, const SupervisionProfile& profile, std::size_t i,
                         const EventString& s) {
  std::size_t state = 0;
  for (EventId e : s) {
    if (!profile.observes(i, e)) continue;
    auto next = obs.step(state, e);
    if (!next) throw Error("observer of supervisor " + std::to_string(i + 1) + " is not total on P(L(G))");
    state = *next;
  }
  return state;
}

}  // namespace

SolveVerdict oracle_solves(const PlantSpec& model, const SupervisionProfile& profile,
                           const SynthesisResult& result, std::size_t k) {
  for (const EventString& s : legal_strings_shortlex(model, k)) {
    StateId q = run_plant(model, s);
    std::vector<std::size_t> states(profile.supervisors(), 0);
    for (std::size_t i = 0; i < profile.supervisors(); ++i)
      states[i] = run_observer(result.supervisors.at(i).observer, profile, i, s);

    for (EventId sigma : model.events_by_name()) {
      auto edge = model.step(q, sigma);
      if (!edge) continue;
      auto fail = [&](Violation v) { return SolveVerdict{false, s, sigma, v}; };
      if (!profile.controllable(sigma)) {
        if (!edge->legal) return fail(Violation::uncontrollable_exit);
        continue;
      }
      auto it = result.defaults.find(sigma);
      FusedDecision dft = it == result.defaults.end() ? FusedDecision::enable : it->second;
      FusedDecision fused;
      try {
        fused = fuse(decision_bag(result, profile, states, sigma), dft);
      } catch (const ControlConflict&) {
        return fail(Violation::fusion_error);
      } catch (const UndefinedFusion&) {
        return fail(Violation::fusion_error);
      }
      if (edge->legal && fused != FusedDecision::enable) return fail(Violation::legal_disabled);
      if (!edge->legal && fused != FusedDecision::disable) return fail(Violation::illegal_enabled);
    }
  }
  return {};
}

// --- conditions by direct expansion -----------------------------------------

namespace {

using StateSet = std::set<StateId>;

struct NaiveWorld {
  StateId q;
  std::vector<StateSet> est;
  bool legal = false;
};

StateSet closure(const PlantSpec& model, const SupervisionProfile& profile, std::size_t i,
                 StateSet s) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (StateId q : StateSet(s)) {
      for (EventId e : model.events()) {
        if (profile.observes(i, e)) continue;
        if (auto edge = model.step(q, e); edge && s.insert(edge->target).second) grew = true;
      }
    }
  }
  return s;
}

std::vector<NaiveWorld> naive_worlds(const PlantSpec& model, const SupervisionProfile& profile) {
  using Key = std::pair<StateId, std::vector<StateSet>>;
  std::map<Key, std::size_t> ids;
  std::vector<NaiveWorld> worlds;
  std::vector<std::vector<std::pair<std::size_t, bool>>> succ;

  NaiveWorld start{model.initial(), {}, false};
  for (std::size_t i = 0; i < profile.supervisors(); ++i)
    start.est.push_back(closure(model, profile, i, {model.initial()}));
  ids[{start.q, start.est}] = 0;
  worlds.push_back(start);
  succ.emplace_back();

  for (std::size_t w = 0; w < worlds.size(); ++w) {
    if (worlds.size() > kOracleWorldBound)
      throw BoundError("more than " + std::to_string(kOracleWorldBound) + " worlds");
    for (EventId e : model.events()) {
      auto edge = model.step(worlds[w].q, e);
      if (!edge) continue;
      NaiveWorld next{edge->target, worlds[w].est, false};
      for (std::size_t i = 0; i < profile.supervisors(); ++i) {
        if (!profile.observes(i, e)) continue;
        StateSet moved;
        for (StateId p : worlds[w].est[i])
          if (auto pe = model.step(p, e)) moved.insert(pe->target);
        next.est[i] = closure(model, profile, i, moved);
      }
      auto [it, fresh] = ids.emplace(Key{next.q, next.est}, worlds.size());
      if (fresh) {
        worlds.push_back(next);
        succ.emplace_back();
      }
      succ[w].push_back({it->second, edge->legal});
    }
  }
  if (worlds.size() > kOracleWorldBound)
    throw BoundError("more than " + std::to_string(kOracleWorldBound) + " worlds");

  std::vector<std::size_t> stack{0};
  worlds[0].legal = true;
  while (!stack.empty()) {
    std::size_t w = stack.back();
    stack.pop_back();
    for (auto [v, legal] : succ[w]) {
      if (legal && !worlds[v].legal) {
        worlds[v].legal = true;
        stack.push_back(v);
      }
    }
  }
  return worlds;
}

class Expander {
 public:
  using Pred = std::function<bool(std::size_t)>;

  Expander(const PlantSpec& model, const SupervisionProfile& profile, std::vector<NaiveWorld> worlds)
      : model_(model), profile_(profile), worlds_(std::move(worlds)) {}

  std::size_t size() const { return worlds_.size(); }
  bool legal(std::size_t w) const { return worlds_[w].legal; }

  bool possible(std::size_t w, EventId s) const { return model_.step(worlds_[w].q, s).has_value(); }
  bool legal_event(std::size_t w, EventId s) const {
    auto edge = model_.step(worlds_[w].q, s);
    return edge && edge->legal;
  }
  bool e(std::size_t w, EventId s) const { return !possible(w, s) || legal_event(w, s); }
  bool d(std::size_t w, EventId s) const { return !legal_event(w, s); }
  bool e_bar(std::size_t w, EventId s) const { return legal_event(w, s); }
  bool d_bar(std::size_t w, EventId s) const { return possible(w, s) && !legal_event(w, s); }

  bool related(Relation rel, std::size_t i, std::size_t w, std::size_t v) const {
    if (rel == Relation::partial && (!legal(w) || !legal(v))) return false;
    return worlds_[w].est[i] == worlds_[v].est[i];
  }

  bool K(Relation rel, std::size_t i, std::size_t w, const Pred& p) const {
    for (std::size_t v = 0; v < size(); ++v)
      if (related(rel, i, w, v) && !p(v)) return false;
    return true;
  }

  bool O(Relation rel, EventId s, std::size_t i, std::size_t w, const Pred& p) const {
    for (std::size_t j : profile_.controllers(s))
      if (j != i && K(rel, j, w, p)) return true;
    return false;
  }

  bool S(Relation rel, EventId s, std::size_t w, const Pred& p) const {
    for (std::size_t j : profile_.controllers(s))
      if (K(rel, j, w, p)) return true;
    return false;
  }

 private:
  const PlantSpec& model_;
  const SupervisionProfile& profile_;
  std::vector<NaiveWorld> worlds_;
};

}  // namespace

bool oracle_condition(const PlantSpec& model, const SupervisionProfile& profile,
                      const CheckOptions& options) {
  Expander x(model, profile, naive_worlds(model, profile));
  const auto P = Relation::partial;

  std::vector<EventId> controllable, uncontrollable;
  for (EventId s : model.events())
    (profile.controllable(s) ? controllable : uncontrollable).push_back(s);

  auto coupled = [&](Relation rel, EventId s, std::size_t w) {
    if (x.e(w, s)) return true;
    for (std::size_t i : profile.controllers(s))
      for (std::size_t j : profile.controllers(s))
        if (x.K(rel, i, w, [&](std::size_t v) {
              return !x.e_bar(v, s) || x.K(rel, j, v, [&](std::size_t u) { return x.e(u, s); });
            }))
          return true;
    return false;
  };

  auto split = [&](EventId s, std::size_t w) {
    if (x.e(w, s)) return true;
    for (std::size_t i : profile.controllers(s)) {
      for (std::size_t j : profile.controllers(s)) {
        if (i == j) continue;
        if (x.K(P, i, w, [&](std::size_t v) { return x.e(v, s); })) return true;
        if (x.K(P, i, w, [&](std::size_t v) { return x.d(v, s); })) return true;
        if (x.K(P, i, w, [&](std::size_t v) {
              return !x.e_bar(v, s) || x.K(P, j, v, [&](std::size_t u) { return x.e(u, s); });
            }))
          return true;
      }
    }
    return false;
  };

  auto forall = [&](const std::vector<EventId>& events, bool legal_only,
                    const std::function<bool(EventId, std::size_t)>& phi) {
    for (EventId s : events)
      for (std::size_t w = 0; w < x.size(); ++w)
        if ((!legal_only || x.legal(w)) && !phi(s, w)) return false;
    return true;
  };

  switch (options.condition) {
    case ConditionId::controllability:
      return forall(uncontrollable, true, [&](EventId s, std::size_t w) { return x.e(w, s); });

    case ConditionId::extended:
      for (EventId s : controllable) {
        bool all_e = true, all_d = true;
        for (std::size_t w = 0; w < x.size(); ++w) {
          if (!x.legal(w)) continue;
          bool covered = false;
          for (std::size_t i : profile.controllers(s)) {
            auto e = [&](std::size_t v) { return x.e(v, s); };
            auto d = [&](std::size_t v) { return x.d(v, s); };
            covered = covered || x.K(P, i, w, e) || x.K(P, i, w, d) ||
                      x.K(P, i, w, [&](std::size_t v) { return !x.e_bar(v, s) || x.O(P, s, i, v, e); }) ||
                      x.K(P, i, w, [&](std::size_t v) { return !x.d_bar(v, s) || x.O(P, s, i, v, d); });
          }
          if (covered) continue;
          all_e = all_e && x.e(w, s);
          all_d = all_d && x.d(w, s);
        }
        if (!all_e && !all_d) return false;
      }
      return true;

    case ConditionId::corrected:
      return forall(controllable, true, [&](EventId s, std::size_t w) { return coupled(P, s, w); });

    case ConditionId::split:
      return forall(controllable, true, [&](EventId s, std::size_t w) {
        return profile.controllers(s).size() >= 2 ? split(s, w) : coupled(P, s, w);
      });

    case ConditionId::legacy:
      return forall(options.events == EventDomain::all ? model.events() : controllable,
                    options.worlds == WorldDomain::legal,
                    [&](EventId s, std::size_t w) { return coupled(options.relation, s, w); });

    case ConditionId::cp:
    case ConditionId::strong_cp:
    case ConditionId::da:
    case ConditionId::strong_da: {
      const bool cp = options.condition == ConditionId::cp || options.condition == ConditionId::strong_cp;
      const bool strong =
          options.condition == ConditionId::strong_cp || options.condition == ConditionId::strong_da;
      const Relation rel = strong ? Relation::total : Relation::partial;
      return forall(controllable, true, [&](EventId s, std::size_t w) {
        if (cp) return x.S(rel, s, w, [&](std::size_t v) { return x.d(v, s); }) || x.e(w, s);
        return x.S(rel, s, w, [&](std::size_t v) { return x.e(v, s); }) || x.d(w, s);
      });
    }
  }
  throw Error("unknown condition");
}

// --- exhaustive search -------------------------------------------------------

std::size_t table_cells(const PlantSpec& model, const SupervisionProfile& profile) {
  std::size_t cells = 0;
  for (std::size_t i = 0; i < profile.supervisors(); ++i) {
    std::size_t controlled = 0;
    for (EventId e : model.events()) controlled += profile.controls(i, e);
    if (controlled) cells += project(model, profile, i).states.size() * controlled;
  }
  return cells;
}

namespace {

struct Constraint {
  std::vector<std::size_t> vars;  // one per controller, in N_σ order
  FusedDecision required;
  std::size_t ready_at = 0;       // largest variable index
};

// Backtracking over the cells of one event.
class EventSearch {
 public:
  EventSearch(std::size_t vars, std::vector<Constraint> constraints,
              std::vector<ControlDecision> order)
      : values_(vars, ControlDecision::abstain), constraints_(std::move(constraints)),
        order_(std::move(order)) {
    by_level_.resize(vars);
    for (std::size_t c = 0; c < constraints_.size(); ++c) by_level_[constraints_[c].ready_at].push_back(c);
  }

  bool run(FusedDecision dft) {
    dft_ = dft;
    if (values_.empty()) return std::all_of(constraints_.begin(), constraints_.end(),
                                            [&](const Constraint& c) { return satisfied(c); });
    return assign(0);
  }

  const std::vector<ControlDecision>& values() const { return values_; }

 private:
  bool satisfied(const Constraint& c) const {
    DecisionBag bag;
    for (std::size_t v : c.vars) bag.push_back(values_[v]);
    try {
      return fuse(bag, dft_) == c.required;
    } catch (const Error&) {
      return false;
    }
  }

  bool assign(std::size_t level) {
    if (level == values_.size()) return true;
    for (ControlDecision d : order_) {
      values_[level] = d;
      bool ok = true;
      for (std::size_t c : by_level_[level])
        if (!satisfied(constraints_[c])) {
          ok = false;
          break;
        }
      if (ok && assign(level + 1)) return true;
    }
    return false;
  }

  std::vector<ControlDecision> values_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> by_level_;
  std::vector<ControlDecision> order_;
  FusedDecision dft_ = FusedDecision::enable;
};

}  // namespace

SearchResult exhaustive_supervisor_search(const PlantSpec& model, const SupervisionProfile& profile,
                                          std::size_t k, std::mt19937* rng) {
  SearchResult out;
  out.cells = table_cells(model, profile);
  if (out.cells > kSearchCellBound)
    throw BoundError(std::to_string(out.cells) + " table cells exceed the search bound of " +
                     std::to_string(kSearchCellBound));

  SynthesisResult witness;
  for (std::size_t i = 0; i < profile.supervisors(); ++i) {
    Supervisor sup;
    sup.index = i;
    sup.observer = project(model, profile, i);
    sup.table.resize(sup.observer.states.size());
    for (auto& row : sup.table)
      for (EventId e : model.events())
        if (profile.controls(i, e)) row[e] = ControlDecision::abstain;
    witness.supervisors.push_back(std::move(sup));
  }

  // Required fused decision per event and tuple of controller states.
  std::map<EventId, std::map<std::vector<std::size_t>, std::set<FusedDecision>>> required;
  for (const EventString& s : legal_strings_shortlex(model, k)) {
    StateId q = run_plant(model, s);
    std::vector<std::size_t> states;
    for (std::size_t i = 0; i < profile.supervisors(); ++i)
      states.push_back(run_observer(witness.supervisors[i].observer, profile, i, s));
    for (EventId sigma : model.events()) {
      auto edge = model.step(q, sigma);
      if (!edge) continue;
      if (!profile.controllable(sigma)) {
        if (!edge->legal) return out;
        continue;
      }
      std::vector<std::size_t> key;
      for (std::size_t i : profile.controllers(sigma)) key.push_back(states[i]);
      required[sigma][key].insert(edge->legal ? FusedDecision::enable : FusedDecision::disable);
    }
  }

  std::vector<ControlDecision> order{ControlDecision::on, ControlDecision::off, ControlDecision::won,
                                     ControlDecision::woff, ControlDecision::abstain};
  std::vector<FusedDecision> defaults{FusedDecision::enable, FusedDecision::disable};

  for (EventId sigma : model.events()) {
    if (!profile.controllable(sigma)) continue;
    if (rng) {
      std::shuffle(order.begin(), order.end(), *rng);
      std::shuffle(defaults.begin(), defaults.end(), *rng);
    }
    auto controllers = profile.controllers(sigma);

    // Variables are the (controller, observer state) cells some constraint uses.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> var_of;
    std::vector<std::pair<std::size_t, std::size_t>> cell_of;
    std::vector<Constraint> constraints;
    for (const auto& [key, decisions] : required[sigma]) {
      if (decisions.size() > 1) return out;  // one cell tuple must both enable and disable
      Constraint c;
      c.required = *decisions.begin();
      for (std::size_t pos = 0; pos < controllers.size(); ++pos) {
        auto cell = std::make_pair(controllers[pos], key[pos]);
        auto [it, fresh] = var_of.emplace(cell, cell_of.size());
        if (fresh) cell_of.push_back(cell);
        c.vars.push_back(it->second);
        c.ready_at = std::max(c.ready_at, it->second);
      }
      constraints.push_back(std::move(c));
    }

    EventSearch search(cell_of.size(), std::move(constraints), order);
    std::optional<FusedDecision> found;
    for (FusedDecision dft : defaults) {
      if (search.run(dft)) {
        found = dft;
        break;
      }
    }
    if (!found) return out;
    witness.defaults[sigma] = *found;
    for (std::size_t v = 0; v < cell_of.size(); ++v) {
      auto [i, state] = cell_of[v];
      witness.supervisors[i].table[state][sigma] = search.values()[v];
    }
  }

  SolveVerdict check = oracle_solves(model, profile, witness, k);
  if (!check.passed) throw Error("search produced tables that fail the string-level check");
  out.exists = true;
  out.witness = std::move(witness);
  return out;
}

// --- random instances ----------------------------------------------------------

Instance random_instance(std::mt19937& rng, const GeneratorParams& params) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  const std::size_t nq = pick(1, params.max_states);
  const std::size_t ne = pick(1, params.max_events);
  const std::size_t n = pick(params.min_supervisors, params.max_supervisors);

  struct Draft {
    std::size_t to;
    bool legal;
  };
  std::vector<bool> legal_state(nq);
  legal_state[0] = true;
  for (std::size_t q = 1; q < nq; ++q) legal_state[q] = coin(0.6);
  std::vector<std::vector<std::optional<Draft>>> delta(nq, std::vector<std::optional<Draft>>(ne));
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t e = 0; e < ne; ++e)
      if (coin(0.55)) {
        std::size_t to = pick(0, nq - 1);
        delta[q][e] = Draft{to, legal_state[q] && legal_state[to] && coin(0.7)};
      }

  auto reach = [&](bool legal_only) {
    std::vector<bool> seen(nq);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      std::size_t q = stack.back();
      stack.pop_back();
      for (const auto& t : delta[q])
        if (t && (!legal_only || t->legal) && !seen[t->to]) {
          seen[t->to] = true;
          stack.push_back(t->to);
        }
    }
    return seen;
  };
  auto in_g = reach(false);
  auto in_e = reach(true);

  PlantBuilder b;
  std::vector<EventId> events;
  for (std::size_t e = 0; e < ne; ++e) events.push_back(b.add_event(std::string(1, char('a' + e))));
  std::vector<std::optional<StateId>> ids(nq);
  for (std::size_t q = 0; q < nq; ++q)
    if (in_g[q]) ids[q] = b.add_state("q" + std::to_string(q), in_e[q]);
  b.set_initial(*ids[0]);
  for (std::size_t q = 0; q < nq; ++q) {
    if (!in_g[q]) continue;
    for (std::size_t e = 0; e < ne; ++e)
      if (const auto& t = delta[q][e]) b.add_transition(*ids[q], events[e], *ids[t->to], t->legal && in_e[q]);
  }
  PlantSpec model = b.build();

  SupervisionProfile profile(n, model.event_count());
  for (std::size_t i = 0; i < n; ++i)
    for (EventId e : model.events()) {
      profile.set_observable(i, e, coin(0.5));
      profile.set_controllable(i, e, coin(0.5));
    }
  return {std::move(model), std::move(profile)};
}

Formula random_formula(std::mt19937& rng, const PlantSpec& model, std::size_t agents,
                       std::size_t depth) {
  auto pick = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(0, hi - 1)(rng); };
  EventId sigma = event_id(pick(model.event_count()));
  if (depth == 0 || pick(4) == 0) return pick(2) ? possible(sigma) : legal_event(sigma);
  auto sub = [&] { return random_formula(rng, model, agents, depth - 1); };
  const std::size_t op = pick(7);
  if (op == 0) return neg(sub());
  if (op >= 4) {
    std::size_t agent = pick(agents);
    Formula inner = sub();
    if (op == 4) return knows(agent, inner);
    if (op == 5) return someone_knows(sigma, inner);
    return other_knows(sigma, agent, inner);
  }
  Formula a = sub();
  Formula b = sub();
  if (op == 1) return conj(a, b);
  if (op == 2) return disj(a, b);
  return implies(a, b);
}

}  // namespace kbsc
