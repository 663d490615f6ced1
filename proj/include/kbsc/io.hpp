#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>
#include "kbsc/automata.hpp"
#include "kbsc/conditions.hpp"
#include "kbsc/kripke.hpp"
#include "kbsc/oracle.hpp"
#include "kbsc/synthesis.hpp"

namespace kbsc {

struct ModelFile {
  PlantSpec model;
  SupervisionProfile profile;
};

/// Parses the line-oriented model format:
///
///   supervisors <n>
///   event <name> [obs=<i,...>] [ctrl=<i,...>]
///   state <name> [init] [legal]
///   trans <src> <event> <dst> [legal]
///
/// `#` starts a comment. Supervisor indices are 1-based. Errors are
/// ModelError with the line and column of the offending token.
ModelFile parse_model(std::string_view text);
ModelFile load_model(const std::filesystem::path& path);

/// Canonical text for a model: events and states in declaration order,
/// transitions grouped by source state.
std::string serialize_model(const PlantSpec& model, const SupervisionProfile& profile);

/// "a b c", or "" for the empty string.
std::string join_events(const PlantSpec& model, const EventString& s);
/// Sorted state names of an estimate, comma separated, in braces.
std::string format_estimate(const PlantSpec& model, const Estimate& est);

using Json = nlohmann::ordered_json;

Json verdict_json(const KripkeFrame& frame, const Verdict& v);
std::string render_verdict(const KripkeFrame& frame, const Verdict& v);

Json supervisor_json(const PlantSpec& model, const Supervisor& sup);
Json defaults_json(const PlantSpec& model, const std::map<EventId, FusedDecision>& defaults);
/// "a=enable b=disable", events by name.
std::string format_defaults(const PlantSpec& model, const std::map<EventId, FusedDecision>& defaults);
Json synthesis_json(const PlantSpec& model, const SynthesisResult& result);

/// Writes supervisor_<i>.json for every supervisor and defaults.json.
void save_supervisors(const std::filesystem::path& dir, const PlantSpec& model,
                      const SynthesisResult& result);
/// Reads the files written by save_supervisors. Observers are rebuilt from
/// the model and estimates are matched by state names.
SynthesisResult load_supervisors(const std::filesystem::path& dir, const PlantSpec& model,
                                 const SupervisionProfile& profile);
SynthesisResult supervisors_from_json(const Json& doc, const PlantSpec& model,
                                      const SupervisionProfile& profile);

/// Everything that went into one fused decision.
struct SupervisorExplanation {
  std::size_t supervisor = 0;
  Estimate estimate;
  /// Worlds the supervisor cannot tell apart from the current one (∼).
  std::vector<std::size_t> alternatives;
  KnowledgeTruths truths;
  PolicyEntry policy;
  /// Entry of the supervisor's table; differs from `policy.decision` only for
  /// hand-edited tables.
  ControlDecision decision = ControlDecision::abstain;
};

struct Explanation {
  std::size_t world = 0;
  EventId event{};
  bool possible = false;
  bool controllable = false;
  std::vector<SupervisorExplanation> supervisors;
  DecisionBag bag;
  FusedDecision dft = FusedDecision::enable;
  std::optional<FusedDecision> fused;
  std::string fusion_error;
};

Explanation explain(const KripkeFrame& frame, const SynthesisResult& result, std::size_t w,
                    EventId sigma);
std::string render_explanation(const KripkeFrame& frame, const Explanation& x);
/// One-line summary of why a case fired, e.g. "K1 e".
std::string describe_case(PolicyCase c, std::size_t supervisor);

/// G with legal states double-circled and illegal transitions dashed.
std::string plant_dot(const PlantSpec& model);
/// G' with each world labelled by its plant state and estimates, stacked.
std::string composite_dot(const KripkeFrame& frame);

}  // namespace kbsc
