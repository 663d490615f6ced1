#include "kbsc/conditions.hpp"

#include <array>
#include <functional>

namespace kbsc {

namespace {

constexpr std::array<std::pair<ConditionId, std::string_view>, 9> kConditionNames{{
    {ConditionId::controllability, "controllability"},
    {ConditionId::extended, "extended"},
    {ConditionId::corrected, "corrected"},
    {ConditionId::split, "split"},
    {ConditionId::legacy, "legacy"},
    {ConditionId::cp, "cp"},
    {ConditionId::da, "da"},
    {ConditionId::strong_cp, "strong-cp"},
    {ConditionId::strong_da, "strong-da"},
}};

Formula any_of(std::vector<Formula> parts) {
  if (parts.empty()) return conj(world_legal(), neg(world_legal()));
  Formula out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out = disj(out, parts[k]);
  return out;
}

std::vector<EventId> controllable_events(const KripkeFrame& frame) {
  std::vector<EventId> out;
  for (EventId e : frame.model().events_by_name())
    if (frame.profile().controllable(e)) out.push_back(e);
  return out;
}

// Keeps the counterexample with the least (witness, event name).
void offer(const KripkeFrame& frame, Verdict& v, Counterexample cx) {
  v.holds = false;
  if (!v.counterexample) {
    v.counterexample = cx;
    return;
  }
  const auto& cur = *v.counterexample;
  const auto& a = frame.witness(cx.world);
  const auto& b = frame.witness(cur.world);
  if (shortlex_less(frame.model(), a, b) ||
      (a == b && frame.model().name(cx.event) < frame.model().name(cur.event)))
    v.counterexample = cx;
}

// Evaluates φ_σ at every world of the domain; records the first failure.
Verdict per_world_check(const KripkeFrame& frame, ConditionId id, Relation rel,
                        WorldDomain worlds, const std::vector<EventId>& events,
                        const std::function<Formula(EventId)>& formula_for,
                        FusedDecision dft) {
  Verdict v;
  v.condition = id;
  Evaluator ev(frame, rel);
  const auto& order = worlds == WorldDomain::legal ? frame.legal_worlds() : frame.report_order();
  for (EventId sigma : events) {
    const auto& truth = ev.truth(formula_for(sigma));
    for (std::size_t w : order) {
      if (!truth[w]) {
        offer(frame, v, {sigma, w, std::nullopt, std::nullopt});
        break;
      }
    }
  }
  if (v.holds) {
    for (EventId sigma : controllable_events(frame)) v.defaults[sigma] = dft;
  }
  return v;
}

}  // namespace

std::string_view to_string(ConditionId c) {
  for (const auto& [id, name] : kConditionNames)
    if (id == c) return name;
  return "?";
}

std::optional<ConditionId> parse_condition(std::string_view s) {
  for (const auto& [id, name] : kConditionNames)
    if (name == s) return id;
  return std::nullopt;
}

Shorthand shorthand(EventId sigma) {
  return {
      disj(neg(possible(sigma)), legal_event(sigma)),
      neg(legal_event(sigma)),
      legal_event(sigma),
      conj(possible(sigma), neg(legal_event(sigma))),
  };
}

KnowledgeLines knowledge_lines(std::size_t i, EventId sigma) {
  Shorthand s = shorthand(sigma);
  return {
      knows(i, s.can_enable),
      knows(i, s.can_disable),
      knows(i, implies(s.must_enable, other_knows(sigma, i, s.can_enable))),
      knows(i, implies(s.must_disable, other_knows(sigma, i, s.can_disable))),
  };
}

Verdict check_controllability(const KripkeFrame& frame) {
  std::vector<EventId> uncontrollable;
  for (EventId e : frame.model().events_by_name())
    if (!frame.profile().controllable(e)) uncontrollable.push_back(e);
  Verdict v = per_world_check(
      frame, ConditionId::controllability, Relation::partial, WorldDomain::legal, uncontrollable,
      [](EventId e) { return shorthand(e).can_enable; }, FusedDecision::enable);
  v.defaults.clear();
  return v;
}

std::vector<std::size_t> uncovered_worlds(Evaluator& partial, EventId sigma) {
  const KripkeFrame& frame = partial.frame();
  std::vector<std::size_t> out;
  std::vector<Formula> lines;
  for (std::size_t i : frame.controllers(sigma)) {
    auto k = knowledge_lines(i, sigma);
    lines.insert(lines.end(), {k.knows_enable, k.knows_disable, k.enable_covered, k.disable_covered});
  }
  const auto& covered = partial.truth(any_of(std::move(lines)));
  for (std::size_t w : frame.legal_worlds())
    if (!covered[w]) out.push_back(w);
  return out;
}

Verdict check_inf_obs_extended(const KripkeFrame& frame,
                               const std::optional<std::map<EventId, FusedDecision>>& frozen) {
  Verdict v;
  v.condition = ConditionId::extended;
  Evaluator ev(frame, Relation::partial);
  std::map<EventId, FusedDecision> chosen;
  for (EventId sigma : controllable_events(frame)) {
    Shorthand s = shorthand(sigma);
    const auto& can_enable = ev.truth(s.can_enable);
    const auto& can_disable = ev.truth(s.can_disable);
    std::optional<std::size_t> needs_enable, needs_disable;
    for (std::size_t w : uncovered_worlds(ev, sigma)) {
      if (!can_disable[w] && !needs_enable) needs_enable = w;
      if (!can_enable[w] && !needs_disable) needs_disable = w;
    }

    if (frozen) {
      auto it = frozen->find(sigma);
      FusedDecision dft = it == frozen->end() ? FusedDecision::enable : it->second;
      auto bad = dft == FusedDecision::enable ? needs_disable : needs_enable;
      if (bad) {
        offer(frame, v, {sigma, *bad, needs_enable, needs_disable});
        continue;
      }
      chosen[sigma] = dft;
      continue;
    }

    if (!needs_disable) {
      chosen[sigma] = FusedDecision::enable;
    } else if (!needs_enable) {
      chosen[sigma] = FusedDecision::disable;
    } else {
      std::size_t first = shortlex_less(frame.model(), frame.witness(*needs_disable),
                                        frame.witness(*needs_enable))
                              ? *needs_disable
                              : *needs_enable;
      offer(frame, v, {sigma, first, needs_enable, needs_disable});
    }
  }
  if (v.holds) v.defaults = std::move(chosen);
  return v;
}

Formula coupled_formula(const KripkeFrame& frame, EventId sigma) {
  Shorthand s = shorthand(sigma);
  std::vector<Formula> parts;
  for (std::size_t i : frame.controllers(sigma))
    for (std::size_t j : frame.controllers(sigma))
      parts.push_back(knows(i, implies(s.must_enable, knows(j, s.can_enable))));
  parts.push_back(s.can_enable);
  return any_of(std::move(parts));
}

Formula split_formula(const KripkeFrame& frame, EventId sigma) {
  Shorthand s = shorthand(sigma);
  std::vector<Formula> parts;
  for (std::size_t i : frame.controllers(sigma)) {
    for (std::size_t j : frame.controllers(sigma)) {
      if (i == j) continue;
      parts.push_back(knows(i, s.can_enable));
      parts.push_back(knows(i, s.can_disable));
      parts.push_back(knows(i, implies(s.must_enable, knows(j, s.can_enable))));
    }
  }
  parts.push_back(s.can_enable);
  return any_of(std::move(parts));
}

Verdict check_inf_obs_corrected(const KripkeFrame& frame, CorrectedShape shape) {
  auto formula = [&](EventId sigma) {
    // Pairs i ≠ j only exist with two or more controllers; a single
    // controller is checked in the coupled shape.
    if (shape == CorrectedShape::split && frame.controllers(sigma).size() >= 2)
      return split_formula(frame, sigma);
    return coupled_formula(frame, sigma);
  };
  return per_world_check(frame,
                         shape == CorrectedShape::coupled ? ConditionId::corrected : ConditionId::split,
                         Relation::partial, WorldDomain::legal, controllable_events(frame), formula,
                         FusedDecision::enable);
}

Verdict check_inf_obs_legacy(const KripkeFrame& frame, Relation rel, WorldDomain worlds,
                             EventDomain events) {
  std::vector<EventId> domain =
      events == EventDomain::all ? frame.model().events_by_name() : controllable_events(frame);
  return per_world_check(
      frame, ConditionId::legacy, rel, worlds, domain,
      [&](EventId sigma) { return coupled_formula(frame, sigma); }, FusedDecision::enable);
}

Verdict check_coobservability(const KripkeFrame& frame, CoobsVariant variant) {
  const bool strong = variant == CoobsVariant::strong_cp || variant == CoobsVariant::strong_da;
  const bool cp = variant == CoobsVariant::cp || variant == CoobsVariant::strong_cp;
  ConditionId id = cp ? (strong ? ConditionId::strong_cp : ConditionId::cp)
                      : (strong ? ConditionId::strong_da : ConditionId::da);
  auto formula = [cp](EventId sigma) {
    Shorthand s = shorthand(sigma);
    // C&P: someone knows d, else e.  D&A: someone knows e, else d.
    return cp ? disj(someone_knows(sigma, s.can_disable), s.can_enable)
              : disj(someone_knows(sigma, s.can_enable), s.can_disable);
  };
  return per_world_check(frame, id, strong ? Relation::total : Relation::partial,
                         WorldDomain::legal, controllable_events(frame), formula,
                         cp ? FusedDecision::enable : FusedDecision::disable);
}

Verdict check(const KripkeFrame& frame, const CheckOptions& options) {
  switch (options.condition) {
    case ConditionId::controllability:
      return check_controllability(frame);
    case ConditionId::extended:
      return check_inf_obs_extended(frame);
    case ConditionId::corrected:
      return check_inf_obs_corrected(frame, CorrectedShape::coupled);
    case ConditionId::split:
      return check_inf_obs_corrected(frame, CorrectedShape::split);
    case ConditionId::legacy:
      return check_inf_obs_legacy(frame, options.relation, options.worlds, options.events);
    case ConditionId::cp:
      return check_coobservability(frame, CoobsVariant::cp);
    case ConditionId::da:
      return check_coobservability(frame, CoobsVariant::da);
    case ConditionId::strong_cp:
      return check_coobservability(frame, CoobsVariant::strong_cp);
    case ConditionId::strong_da:
      return check_coobservability(frame, CoobsVariant::strong_da);
  }
  throw Error("unknown condition");
}

}  // namespace kbsc
