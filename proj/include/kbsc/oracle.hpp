#pragma once

// Brute-force validators that share no evaluation code with the checkers:
// strings are enumerated explicitly, worlds are rebuilt from estimate sets,
// and conditions are expanded quantifier by quantifier.

#include <cstddef>
#include <optional>
#include <random>

#include "kbsc/automata.hpp"
#include "kbsc/conditions.hpp"
#include "kbsc/formula.hpp"
#include "kbsc/synthesis.hpp"

namespace kbsc {

inline constexpr std::size_t kOracleDepthBound = 10;
inline constexpr std::size_t kOracleWorldBound = 64;
inline constexpr std::size_t kSearchCellBound = 10;

/// Which of the three solvability implications failed.
enum class Violation {
  uncontrollable_exit,  // s ∈ L(E), σ ∈ Σ_uc, sσ ∈ L(G) \ L(E)
  legal_disabled,       // s ∈ L(E), σ ∈ Σ_c, sσ ∈ L(E), fused disable
  illegal_enabled,      // s ∈ L(E), σ ∈ Σ_c, sσ ∈ L(G) \ L(E), fused enable
  fusion_error,         // the decisions at s cannot be fused
};

std::string_view to_string(Violation v);

struct SolveVerdict {
  bool passed = true;
  EventString string;
  std::optional<EventId> event;
  std::optional<Violation> violation;
};

/// Checks the three implications on every s ∈ L(E) with |s| ≤ k, in shortlex
/// order, running each supervisor's observer on its own projection of s.
SolveVerdict oracle_solves(const PlantSpec& model, const SupervisionProfile& profile,
                           const SynthesisResult& result, std::size_t k);

/// Direct expansion of a condition over naively built worlds. Throws
/// BoundError above kOracleWorldBound worlds.
bool oracle_condition(const PlantSpec& model, const SupervisionProfile& profile,
                      const CheckOptions& options);

struct SearchResult {
  bool exists = false;
  std::optional<SynthesisResult> witness;
  std::size_t cells = 0;
};

/// Σ_i |states of P_i(G)| · |Σ_{i,c}|.
std::size_t table_cells(const PlantSpec& model, const SupervisionProfile& profile);

/// Looks for decision tables over all five decisions and a default per event
/// that pass oracle_solves at depth k. Each implication only involves the
/// cells and default of one event, so events are searched independently.
/// Throws BoundError above kSearchCellBound cells. `rng`, when given,
/// shuffles the order in which decisions are tried.
SearchResult exhaustive_supervisor_search(const PlantSpec& model, const SupervisionProfile& profile,
                                          std::size_t k, std::mt19937* rng = nullptr);

struct Instance {
  PlantSpec model;
  SupervisionProfile profile;
};

struct GeneratorParams {
  std::size_t max_states = 5;
  std::size_t max_events = 3;
  std::size_t min_supervisors = 1;
  std::size_t max_supervisors = 3;
};

/// Random plant with E trimmed to the part reachable along legal
/// transitions, and random observation and control sets.
Instance random_instance(std::mt19937& rng, const GeneratorParams& params = {});

/// Random formula over σ_G, σ_E, ¬, ∧, ∨, ⟹, K_i, S and O of depth ≤ depth.
Formula random_formula(std::mt19937& rng, const PlantSpec& model, std::size_t agents,
                       std::size_t depth);

}  // namespace kbsc
