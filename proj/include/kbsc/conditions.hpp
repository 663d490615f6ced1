#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "kbsc/formula.hpp"
#include "kbsc/fusion.hpp"
#include "kbsc/kripke.hpp"

namespace kbsc {

enum class ConditionId {
  controllability,
  extended,   // five decisions, per-event default
  corrected,  // two-decision-line form over ∼, coupled shape
  split,      // the same with the four-line split shape
  legacy,     // the coupled form over a chosen relation and domains
  cp,
  da,
  strong_cp,
  strong_da,
};

std::string_view to_string(ConditionId c);
std::optional<ConditionId> parse_condition(std::string_view s);

enum class CorrectedShape { coupled, split };
enum class WorldDomain { legal, all };
enum class EventDomain { controllable, all };
enum class CoobsVariant { cp, da, strong_cp, strong_da };

/// Event-indexed shorthand formulas.
struct Shorthand {
  Formula can_enable;    // e  = ¬σ_G ∨ σ_E
  Formula can_disable;   // d  = ¬σ_E
  Formula must_enable;   // ē  = σ_E
  Formula must_disable;  // d̄  = σ_G ∧ ¬σ_E
};

Shorthand shorthand(EventId sigma);

/// What supervisor i knows about σ. These four formulas drive both the
/// extended condition (each line is their disjunction over N_σ) and the
/// knowledge-based control policy.
struct KnowledgeLines {
  Formula knows_enable;      // K_i e
  Formula knows_disable;     // K_i d
  Formula enable_covered;    // K_i(ē ⟹ O e)
  Formula disable_covered;   // K_i(d̄ ⟹ O d)
};

KnowledgeLines knowledge_lines(std::size_t i, EventId sigma);

struct Counterexample {
  EventId event{};
  /// World where the condition fails.
  std::size_t world = 0;
  /// Extended check only: uncovered worlds that demand enabling and
  /// disabling respectively.
  std::optional<std::size_t> needs_enable;
  std::optional<std::size_t> needs_disable;
};

struct Verdict {
  ConditionId condition = ConditionId::extended;
  bool holds = true;
  /// Default fused decision per controllable event (observability conditions
  /// only; filled when holds).
  std::map<EventId, FusedDecision> defaults;
  std::optional<Counterexample> counterexample;
};

/// L(E)Σ_uc ∩ L(G) ⊆ L(E), checked as e at every legal world for every
/// uncontrollable event.
Verdict check_controllability(const KripkeFrame& frame);

/// Legal worlds where none of the four knowledge lines holds for σ (every
/// controller would abstain), in report order.
std::vector<std::size_t> uncovered_worlds(Evaluator& partial, EventId sigma);

/// Extended condition. For each σ ∈ Σ_c the uncovered worlds must agree on
/// e (default enable) or on d (default disable); enable wins ties and empty
/// sets. With `frozen`, the given defaults are checked instead of chosen.
Verdict check_inf_obs_extended(const KripkeFrame& frame,
                               const std::optional<std::map<EventId, FusedDecision>>& frozen = {});

Verdict check_inf_obs_corrected(const KripkeFrame& frame, CorrectedShape shape);

Verdict check_inf_obs_legacy(const KripkeFrame& frame, Relation rel, WorldDomain worlds,
                             EventDomain events);

Verdict check_coobservability(const KripkeFrame& frame, CoobsVariant variant);

/// The formula the coupled corrected and legacy checks evaluate for σ.
Formula coupled_formula(const KripkeFrame& frame, EventId sigma);
/// The four-line split formula for σ (only meaningful when |N_σ| ≥ 2).
Formula split_formula(const KripkeFrame& frame, EventId sigma);

struct CheckOptions {
  ConditionId condition = ConditionId::extended;
  Relation relation = Relation::total;        // legacy only
  WorldDomain worlds = WorldDomain::all;      // legacy only
  EventDomain events = EventDomain::controllable;  // legacy only
};

/// Dispatches to the checker selected by `options.condition`.
Verdict check(const KripkeFrame& frame, const CheckOptions& options);

}  // namespace kbsc
