#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "kbsc/automata.hpp"
#include "kbsc/conditions.hpp"
#include "kbsc/fusion.hpp"
#include "kbsc/kripke.hpp"
#include "kbsc/observation.hpp"

namespace kbsc {

/// Which branch of the knowledge-based policy produced a decision.
enum class PolicyCase {
  knows_enable,         // K_i e, ¬K_i d                       -> on
  knows_disable,        // ¬K_i e, K_i d                       -> off
  bets_enable,          // only K_i(d̄ ⟹ O d) of the two lines  -> won
  bets_disable,         // only K_i(ē ⟹ O e)                   -> woff
  others_cover,         // both conditional lines               -> abstain
  knows_both,           // K_i e ∧ K_i d: σ cannot occur        -> abstain
  no_knowledge,         // none of the four lines               -> abstain
  no_legal_world,       // estimate only reached by illegal strings -> abstain
};

std::string_view to_string(PolicyCase c);
std::optional<PolicyCase> parse_policy_case(std::string_view s);

struct KnowledgeTruths {
  bool knows_enable = false;
  bool knows_disable = false;
  bool enable_covered = false;
  bool disable_covered = false;
};

struct PolicyEntry {
  ControlDecision decision = ControlDecision::abstain;
  PolicyCase why = PolicyCase::no_knowledge;
};

PolicyEntry policy_from(const KnowledgeTruths& t);

/// Two worlds sharing supervisor i's estimate were assigned different
/// decisions.
class PolicyAmbiguity : public Error {
 public:
  using Error::Error;
};

/// Evaluates the knowledge lines of the policy under the partial relation,
/// reusing truth tables across worlds.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(const KripkeFrame& frame) : frame_(frame), ev_(frame, Relation::partial) {}

  const KripkeFrame& frame() const { return frame_; }
  Evaluator& evaluator() { return ev_; }

  KnowledgeTruths truths(std::size_t w, std::size_t i, EventId sigma);
  PolicyEntry kp(std::size_t w, EventId sigma, std::size_t i) { return policy_from(truths(w, i, sigma)); }

 private:
  const KnowledgeLines& lines(std::size_t i, EventId sigma);

  const KripkeFrame& frame_;
  Evaluator ev_;
  std::map<std::pair<std::size_t, EventId>, KnowledgeLines> lines_;
};

/// KP_i(w, σ).
ControlDecision kp(const KripkeFrame& frame, std::size_t w, EventId sigma, std::size_t i);

/// KP'_i: one entry per state of supervisor i's observer. Agreement is
/// required among the legal worlds of each estimate; illegal worlds carry
/// vacuous knowledge and are ignored.
std::vector<PolicyEntry> project_policy(KnowledgeBase& kb, std::size_t i, EventId sigma);

/// Moore-machine supervisor: the observer P_i(G) and a decision per
/// observer state and controlled event.
struct Supervisor {
  std::size_t index = 0;
  Observer observer;
  /// [observer state] -> event -> decision, for the events i controls.
  std::vector<std::map<EventId, ControlDecision>> table;
  /// Same shape as `table`; empty when the supervisor was not synthesized.
  std::vector<std::map<EventId, PolicyCase>> provenance;

  ControlDecision decision(std::size_t state, EventId sigma) const;
};

struct SynthesisResult {
  std::vector<Supervisor> supervisors;
  std::map<EventId, FusedDecision> defaults;
};

class SynthesisFailure : public Error {
 public:
  SynthesisFailure(const std::string& what, Verdict v) : Error(what), verdict_(std::move(v)) {}
  const Verdict& verdict() const { return verdict_; }

 private:
  Verdict verdict_;
};

class NotControllable : public SynthesisFailure {
 public:
  explicit NotControllable(Verdict v) : SynthesisFailure("language is not controllable", std::move(v)) {}
};

class NotInferenceObservable : public SynthesisFailure {
 public:
  explicit NotInferenceObservable(Verdict v)
      : SynthesisFailure("language is not inference-observable", std::move(v)) {}
};

SynthesisResult synthesize(const KripkeFrame& frame);
SynthesisResult synthesize(const PlantSpec& model, const SupervisionProfile& profile);

/// Decisions of N_σ at the given observer states, in supervisor order.
DecisionBag decision_bag(const SynthesisResult& result, const SupervisionProfile& profile,
                         const std::vector<std::size_t>& observer_states, EventId sigma);

/// Whether σ may occur when the supervisors are in the given observer
/// states. Uncontrollable events are always allowed.
bool allowed(const SynthesisResult& result, const SupervisionProfile& profile,
             const std::vector<std::size_t>& observer_states, EventId sigma);

/// G under joint supervision, restricted to its reachable part.
Dfa closed_loop(const PlantSpec& model, const SupervisionProfile& profile,
                const SynthesisResult& result);

/// L(f/G) = L(E)?
Equivalence verify_solution(const PlantSpec& model, const SupervisionProfile& profile,
                            const SynthesisResult& result);

}  // namespace kbsc
