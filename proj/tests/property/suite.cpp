#include "suite.hpp"

#include <random>
#include <set>

#include "kbsc/io.hpp"

namespace kbsc::test {

namespace {

std::string tag(const Numbered& n) { return "instance #" + std::to_string(n.id); }

std::string at(const KripkeFrame& f, std::size_t w, EventId e) {
  return "world " + f.describe(w) + " (\"" + join_events(f.model(), f.witness(w)) + "\"), event " +
         f.model().name(e);
}

std::vector<EventId> controllable(const Instance& x) {
  std::vector<EventId> out;
  for (EventId e : x.model.events())
    if (x.profile.controllable(e)) out.push_back(e);
  return out;
}

bool holds(const KripkeFrame& f, ConditionId c) {
  CheckOptions o;
  o.condition = c;
  return check(f, o).holds;
}

Formula any_of(std::vector<Formula> parts) {
  if (parts.empty()) {
    // Empty disjunction: a contradiction over any event.
    Formula p = possible(event_id(0));
    return conj(p, neg(p));
  }
  Formula out = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) out = disj(out, parts[k]);
  return out;
}

Dfa composite_dfa(const PlantSpec& m, const Composite& c) {
  Dfa out;
  auto events = m.events();
  for (EventId e : events) out.alphabet.push_back(m.name(e));
  out.next.assign(c.size(), std::vector<std::optional<std::size_t>>(events.size()));
  for (std::size_t w = 0; w < c.size(); ++w)
    for (std::size_t k = 0; k < events.size(); ++k) out.next[w][k] = c.step(w, events[k]);
  return out;
}

// Modal-free formula over σ_G and σ_E.
Formula propositional(std::mt19937& rng, const PlantSpec& m, std::size_t depth) {
  auto pick = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(0, hi - 1)(rng); };
  EventId e = event_id(pick(m.event_count()));
  if (depth == 0 || pick(3) == 0) return pick(2) ? possible(e) : legal_event(e);
  switch (pick(4)) {
    case 0:
      return neg(propositional(rng, m, depth - 1));
    case 1:
      return conj(propositional(rng, m, depth - 1), propositional(rng, m, depth - 1));
    case 2:
      return disj(propositional(rng, m, depth - 1), propositional(rng, m, depth - 1));
    default:
      return implies(propositional(rng, m, depth - 1), propositional(rng, m, depth - 1));
  }
}

bool prefix_closed(const std::set<EventString>& lang) {
  for (const auto& s : lang)
    if (!s.empty() && !lang.count(EventString(s.begin(), s.end() - 1))) return false;
  return true;
}

}  // namespace

std::string Tally::summary() const {
  std::string out = std::to_string(instances) + " instances, " + std::to_string(checks) + " checks, " +
                    std::to_string(violations) + " violations";
  if (skipped) out += ", " + std::to_string(skipped) + " skipped";
  if (!first.empty()) out += "; first: " + first;
  return out;
}

std::vector<Numbered> instance_set(std::uint32_t seed, std::size_t count, const GeneratorParams& params) {
  std::mt19937 rng(seed);
  std::vector<Numbered> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back({k, random_instance(rng, params)});
  return out;
}

std::vector<Numbered> two_supervisor_set(std::uint32_t seed, std::size_t count) {
  GeneratorParams p;
  p.min_supervisors = p.max_supervisors = 2;
  return instance_set(seed, count, p);
}

Tally shape_equivalence(const std::vector<Numbered>& set) {
  Tally t;
  for (const auto& n : set) {
    const auto& x = n.instance;
    auto frame = build_frame(x.model, x.profile);
    bool shared = false;
    Evaluator ev(frame, Relation::partial);
    for (EventId e : controllable(x)) {
      if (frame.controllers(e).size() < 2) continue;
      shared = true;
      auto coupled = ev.truth(coupled_formula(frame, e));
      auto split = ev.truth(split_formula(frame, e));
      for (std::size_t w : frame.legal_worlds()) {
        ++t.checks;
        if (coupled[w] != split[w])
          t.fail(tag(n) + ": coupled " + std::to_string(coupled[w]) + " vs split at " + at(frame, w, e));
      }
    }
    if (!shared) {
      ++t.skipped;
      continue;
    }
    ++t.instances;
    ++t.checks;
    bool a = check_inf_obs_corrected(frame, CorrectedShape::coupled).holds;
    bool b = check_inf_obs_corrected(frame, CorrectedShape::split).holds;
    if (a != b) t.fail(tag(n) + ": coupled verdict " + std::to_string(a) + ", split verdict " + std::to_string(b));
  }
  return t;
}

Tally controllability_separation(const std::vector<Numbered>& set) {
  Tally t;
  for (const auto& n : set) {
    auto frame = build_frame(n.instance.model, n.instance.profile);
    ++t.instances;
    ++t.checks;
    bool lhs = check_controllability(frame).holds &&
               check_inf_obs_corrected(frame, CorrectedShape::coupled).holds;
    bool rhs = check_inf_obs_legacy(frame, Relation::partial, WorldDomain::legal, EventDomain::all).holds;
    if (lhs != rhs)
      t.fail(tag(n) + ": controllability ∧ corrected = " + std::to_string(lhs) + ", over all events = " +
             std::to_string(rhs));
  }
  return t;
}

Tally encapsulation(const std::vector<Numbered>& set, std::uint32_t seed, std::size_t formulas) {
  Tally t;
  for (const auto& n : set) {
    const auto& x = n.instance;
    auto frame = build_frame(x.model, x.profile);
    std::mt19937 rng(seed + static_cast<std::uint32_t>(n.id));
    Evaluator partial(frame, Relation::partial);
    Evaluator total(frame, Relation::total);
    ++t.instances;
    for (std::size_t k = 0; k < formulas; ++k) {
      Formula phi = random_formula(rng, x.model, frame.agents(), 4);
      Formula guarded = guard_transform(phi);
      const auto& lhs = partial.truth(phi);
      const auto& rhs = total.truth(guarded);
      for (std::size_t w = 0; w < frame.size(); ++w) {
        if (frame.legal(w)) {
          ++t.checks;
          if (lhs[w] != rhs[w]) t.fail(tag(n) + ": " + to_string(phi, x.model) + " at " + frame.describe(w));
          continue;
        }
        for (std::size_t i = 0; i < frame.agents(); ++i) {
          ++t.checks;
          if (!partial.eval(w, knows(i, phi)))
            t.fail(tag(n) + ": K" + std::to_string(i + 1) + " not vacuous at illegal " + frame.describe(w));
        }
      }
    }
  }
  return t;
}

Tally relation_monotonicity(const std::vector<Numbered>& set, std::uint32_t seed, std::size_t formulas) {
  Tally t;
  for (const auto& n : set) {
    const auto& x = n.instance;
    auto frame = build_frame(x.model, x.profile);
    std::mt19937 rng(seed + static_cast<std::uint32_t>(n.id));
    Evaluator partial(frame, Relation::partial);
    Evaluator total(frame, Relation::total);
    ++t.instances;
    for (std::size_t k = 0; k < formulas; ++k) {
      Formula phi = random_formula(rng, x.model, frame.agents(), 3);
      Formula psi = random_formula(rng, x.model, frame.agents(), 2);
      EventId sigma = event_id(k % x.model.event_count());
      // Only for modal-free operands: below a negated K the two relations
      // disagree on the operand itself and the inclusion says nothing.
      Formula flat = propositional(rng, x.model, 3);
      for (std::size_t i = 0; i < frame.agents(); ++i) {
        const auto& kt = total.truth(knows(i, flat));
        const auto& kp = partial.truth(knows(i, flat));
        for (std::size_t w = 0; w < frame.size(); ++w) {
          ++t.checks;
          if (kt[w] && !kp[w])
            t.fail(tag(n) + ": K under ≃ without K under ∼ at " + frame.describe(w) + " for " + to_string(flat, x.model));
        }
      }
      std::vector<Formula> all, others;
      auto ctrl = frame.controllers(sigma);
      for (std::size_t i : ctrl) all.push_back(knows(i, phi));
      const std::size_t excluded = ctrl.empty() ? 0 : ctrl.front();
      for (std::size_t i : ctrl)
        if (i != excluded) others.push_back(knows(i, phi));
      for (Relation rel : {Relation::partial, Relation::total}) {
        Evaluator& ev = rel == Relation::partial ? partial : total;
        Evaluator fresh(frame, rel);
        const std::pair<Formula, Formula> pairs[] = {
            {implies(phi, psi), disj(neg(phi), psi)},
            {someone_knows(sigma, phi), any_of(all)},
            {other_knows(sigma, excluded, phi), any_of(others)},
        };
        for (const auto& [lhs, rhs] : pairs) {
          const auto& a = ev.truth(lhs);
          const auto& b = fresh.truth(rhs);
          for (std::size_t w = 0; w < frame.size(); ++w) {
            ++t.checks;
            if (a[w] != b[w]) t.fail(tag(n) + ": " + to_string(lhs, x.model) + " differs from its expansion");
          }
        }
        // Order independence of the memo: a fresh evaluator agrees.
        Evaluator again(frame, rel);
        ++t.checks;
        if (again.truth(phi) != ev.truth(phi)) t.fail(tag(n) + ": memoized evaluation differs");
      }
    }
  }
  return t;
}

Tally synthesis_soundness(const std::vector<Numbered>& set) {
  Tally t;
  for (const auto& n : set) {
    const auto& x = n.instance;
    auto frame = build_frame(x.model, x.profile);
    SynthesisResult r;
    try {
      r = synthesize(frame);
    } catch (const SynthesisFailure&) {
      ++t.skipped;
      continue;
    }
    ++t.instances;
    ++t.checks;
    try {
      auto eq = verify_solution(x.model, x.profile, r);
      if (!eq.equal) {
        std::string cx;
        for (const auto& e : eq.counterexample) cx += (cx.empty() ? "" : " ") + e;
        t.fail(tag(n) + ": closed loop differs from L(E) on \"" + cx + "\"");
      }
    } catch (const Error& e) {
      t.fail(tag(n) + ": " + e.what());
    }
    for (std::size_t w : frame.legal_worlds())
      for (EventId e : controllable(x)) {
        if (!frame.holds(w, {Proposition::Kind::possible, e})) continue;
        ++t.checks;
        auto x_ = explain(frame, r, w, e);
        if (!x_.fused) t.fail(tag(n) + ": fusion error at " + at(frame, w, e) + ": " + x_.fusion_error);
      }
    ++t.checks;
    auto o = oracle_solves(x.model, x.profile, r, std::min(x.model.state_count() + 1, kOracleDepthBound));
    if (!o.passed) t.fail(tag(n) + ": oracle rejects the synthesized supervisors");
  }
  return t;
}

Tally search_completeness(const std::vector<Numbered>& set) {
  Tally t;
  for (const auto& n : set) {
    const auto& x = n.instance;
    const std::size_t k = x.model.state_count() + 1;
    if (table_cells(x.model, x.profile) > kSearchCellBound || k > kOracleDepthBound) {
      ++t.skipped;
      continue;
    }
    ++t.instances;
    ++t.checks;
    auto frame = build_frame(x.model, x.profile);
    bool checker = check_controllability(frame).holds && check_inf_obs_extended(frame).holds;
    bool found = exhaustive_supervisor_search(x.model, x.profile, k).exists;
    if (checker != found)
      t.fail(tag(n) + ": checker " + std::to_string(checker) + ", search " + std::to_string(found) + "\n" +
             serialize_model(x.model, x.profile));
  }
  return t;
}

Tally weakening_chain(const std::vector<Numbered>& set) {
  Tally t;
  const std::pair<ConditionId, ConditionId> chain[] = {
      {ConditionId::corrected, ConditionId::extended}, {ConditionId::cp, ConditionId::extended},
      {ConditionId::da, ConditionId::extended},        {ConditionId::strong_cp, ConditionId::cp},
      {ConditionId::strong_da, ConditionId::da},
  };
  for (const auto& n : set) {
    auto frame = build_frame(n.instance.model, n.instance.profile);
    ++t.instances;
    for (auto [strong, weak] : chain) {
      ++t.checks;
      if (holds(frame, strong) && !holds(frame, weak))
        t.fail(tag(n) + ": " + std::string(to_string(strong)) + " holds but " + std::string(to_string(weak)) +
               " fails");
    }
  }
  return t;
}

Tally oracle_agreement(const std::vector<Numbered>& set) {
  Tally t;
  std::vector<CheckOptions> options;
  for (auto c : {ConditionId::controllability, ConditionId::extended, ConditionId::corrected, ConditionId::split,
                 ConditionId::cp, ConditionId::da, ConditionId::strong_cp, ConditionId::strong_da})
    options.push_back({c});
  for (auto rel : {Relation::partial, Relation::total})
    for (auto worlds : {WorldDomain::legal, WorldDomain::all})
      for (auto events : {EventDomain::controllable, EventDomain::all})
        options.push_back({ConditionId::legacy, rel, worlds, events});

  for (const auto& n : set) {
    const auto& x = n.instance;
    auto frame = build_frame(x.model, x.profile);
    if (frame.size() > kOracleWorldBound) {
      ++t.skipped;
      continue;
    }
    ++t.instances;
    for (const auto& o : options) {
      ++t.checks;
      bool a = check(frame, o).holds;
      bool b = oracle_condition(x.model, x.profile, o);
      if (a != b)
        t.fail(tag(n) + ": " + std::string(to_string(o.condition)) + " checker " + std::to_string(a) +
               ", oracle " + std::to_string(b));
    }
  }
  return t;
}

Tally frozen_defaults(const std::vector<Numbered>& set) {
  Tally t;
  for (const auto& n : set) {
    auto frame = build_frame(n.instance.model, n.instance.profile);
    auto v = check_inf_obs_extended(frame);
    if (!v.holds) {
      ++t.skipped;
      continue;
    }
    ++t.instances;
    ++t.checks;
    if (!check_inf_obs_extended(frame, v.defaults).holds) t.fail(tag(n) + ": frozen defaults fail");
  }
  return t;
}

Tally policy_coupling(const std::vector<Numbered>& set) {
  Tally t;
  for (const auto& n : set) {
    const auto& x = n.instance;
    auto frame = build_frame(x.model, x.profile);
    KnowledgeBase kb(frame);
    std::optional<SynthesisResult> r;
    try {
      r = synthesize(frame);
    } catch (const SynthesisFailure&) {
    }
    ++t.instances;
    for (std::size_t w : frame.legal_worlds())
      for (EventId e : controllable(x)) {
        const bool possible = frame.holds(w, {Proposition::Kind::possible, e});
        const bool legal = frame.holds(w, {Proposition::Kind::legal_event, e});
        bool any_line = false, definite = false, on = false, off = false, abstain_with_knowledge = false;
        for (std::size_t i : frame.controllers(e)) {
          auto tr = kb.truths(w, i, e);
          auto p = policy_from(tr);
          any_line |= tr.knows_enable || tr.knows_disable || tr.enable_covered || tr.disable_covered;
          on |= p.decision == ControlDecision::on;
          off |= p.decision == ControlDecision::off;
          abstain_with_knowledge |= p.why == PolicyCase::others_cover;
        }
        definite = on || off;
        if (possible) {
          ++t.checks;
          if (on && off) t.fail(tag(n) + ": on and off together at " + at(frame, w, e));
          ++t.checks;
          if (abstain_with_knowledge && !definite)
            t.fail(tag(n) + ": covered abstention without a definite decision at " + at(frame, w, e));
        }
        if (!r || !possible || !any_line) continue;
        ++t.checks;
        auto fused = explain(frame, *r, w, e).fused;
        auto want = legal ? FusedDecision::enable : FusedDecision::disable;
        if (fused != want) t.fail(tag(n) + ": fused decision contradicts legality at " + at(frame, w, e));
      }
  }
  return t;
}

Tally structural_invariants(const std::vector<Numbered>& set) {
  Tally t;
  for (const auto& n : set) {
    const auto& x = n.instance;
    const auto& m = x.model;
    ++t.instances;
    auto g = to_dfa(m, false);
    auto e = to_dfa(m, true);
    const std::size_t k = std::min<std::size_t>(g.state_count() + e.state_count(), kDefaultEnumerationBound);
    auto lg = language_upto(m, k, false);
    auto le = language_upto(m, k, true);
    t.checks += 4;
    if (!prefix_closed(lg) || !prefix_closed(le)) t.fail(tag(n) + ": bounded language not prefix-closed");
    for (const auto& s : le)
      if (!lg.count(s)) {
        t.fail(tag(n) + ": legal string outside L(G)");
        break;
      }
    if (dfa_equivalent(g, e).equal != (lg == le)) t.fail(tag(n) + ": equivalence disagrees with string sets");
    if (!dfa_equivalent(e, g).equal != !dfa_equivalent(g, e).equal) t.fail(tag(n) + ": equivalence not symmetric");

    auto c = compose(m, x.profile);
    ++t.checks;
    if (!dfa_equivalent(composite_dfa(m, c), g).equal) t.fail(tag(n) + ": G′ and G generate different languages");
    for (std::size_t w = 0; w < c.size(); ++w)
      for (std::size_t i = 0; i < x.profile.supervisors(); ++i) {
        ++t.checks;
        const auto& est = c.estimate(w, i);
        if (!std::binary_search(est.begin(), est.end(), c.worlds[w].plant))
          t.fail(tag(n) + ": plant state missing from estimate " + std::to_string(i + 1));
      }
    ++t.checks;
    auto again = compose(m, x.profile);
    if (again.worlds != c.worlds || again.witness != c.witness) t.fail(tag(n) + ": composition not deterministic");
  }
  return t;
}

}  // namespace kbsc::test
