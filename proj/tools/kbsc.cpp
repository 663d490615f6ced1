// kbsc: check, synthesize, verify and simulate decentralized supervisors.
//
// Exit status: 0 when the condition holds (or verification succeeds), 1 when
// it fails, 2 for usage, parse and model errors.

#include <unistd.h>

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "kbsc/conditions.hpp"
#include "kbsc/io.hpp"
#include "kbsc/kripke.hpp"
#include "kbsc/oracle.hpp"
#include "kbsc/run_config.hpp"
#include "kbsc/synthesis.hpp"

using namespace kbsc;

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;

const std::map<std::string, ConditionId> kConditions{
    {"controllability", ConditionId::controllability},
    {"extended", ConditionId::extended},
    {"corrected", ConditionId::corrected},
    {"split", ConditionId::split},
    {"legacy", ConditionId::legacy},
    {"cp", ConditionId::cp},
    {"da", ConditionId::da},
    {"strong-cp", ConditionId::strong_cp},
    {"strong-da", ConditionId::strong_da},
};
const std::map<std::string, Relation> kRelations{{"partial", Relation::partial}, {"total", Relation::total}};
const std::map<std::string, WorldDomain> kWorlds{{"legal", WorldDomain::legal}, {"all", WorldDomain::all}};
const std::map<std::string, EventDomain> kEvents{{"controllable", EventDomain::controllable},
                                                 {"all", EventDomain::all}};

std::size_t default_depth(const PlantSpec& model) {
  return std::min(model.state_count() + 1, kOracleDepthBound);
}

SynthesisResult supervisors_for(const ModelFile& f, const std::string& dir) {
  if (!dir.empty()) return load_supervisors(dir, f.model, f.profile);
  return synthesize(f.model, f.profile);
}

void print_failure(const KripkeFrame& frame, const SynthesisFailure& e, bool json) {
  if (json) {
    Json out = verdict_json(frame, e.verdict());
    out["error"] = e.what();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << e.what() << "\n" << render_verdict(frame, e.verdict());
  }
}

// --- commands ------------------------------------------------------------------

int cmd_check(const std::string& file, const RunConfig& config) {
  CheckOptions options = validate(config);
  ModelFile f = load_model(file);
  KripkeFrame frame = build_frame(f.model, f.profile);
  Verdict v = check(frame, options);
  if (config.json) std::cout << verdict_json(frame, v).dump(2) << "\n";
  else std::cout << render_verdict(frame, v);
  return v.holds ? kHolds : kFails;
}

int cmd_synthesize(const std::string& file, const std::string& out_dir, bool json) {
  ModelFile f = load_model(file);
  KripkeFrame frame = build_frame(f.model, f.profile);
  SynthesisResult result;
  try {
    result = synthesize(frame);
  } catch (const SynthesisFailure& e) {
    print_failure(frame, e, json);
    return kFails;
  }
  if (!out_dir.empty()) save_supervisors(out_dir, f.model, result);
  if (json) {
    Json out = synthesis_json(f.model, result);
    out["holds"] = true;
    std::cout << out.dump(2) << "\n";
    return kHolds;
  }
  for (const auto& sup : result.supervisors) {
    std::cout << "supervisor " << sup.index + 1 << "\n";
    for (std::size_t s = 0; s < sup.table.size(); ++s) {
      for (const auto& [e, d] : sup.table[s]) {
        std::cout << "  " << format_estimate(f.model, sup.observer.states[s]) << " " << f.model.name(e) << " -> "
                  << to_string(d) << " (" << describe_case(sup.provenance[s].at(e), sup.index) << ")\n";
      }
    }
  }
  std::cout << "defaults: " << format_defaults(f.model, result.defaults) << "\n";
  if (!out_dir.empty()) std::cout << "written to " << out_dir << "\n";
  return kHolds;
}

int cmd_verify(const std::string& file, const std::string& dir, std::optional<std::size_t> depth) {
  ModelFile f = load_model(file);
  RunConfig rc;
  rc.depth = depth;
  validate(rc);
  SynthesisResult result = load_supervisors(dir, f.model, f.profile);
  const std::size_t k = depth.value_or(default_depth(f.model));

  Equivalence eq;
  std::string loop_error;
  try {
    eq = verify_solution(f.model, f.profile, result);
  } catch (const Error& e) {
    loop_error = e.what();
  }
  SolveVerdict sv = oracle_solves(f.model, f.profile, result, k);

  if (!loop_error.empty()) {
    std::cout << "closed loop: error: " << loop_error << "\n";
  } else if (eq.equal) {
    std::cout << "closed loop: equals the legal language\n";
  } else {
    std::string s;
    for (const auto& name : eq.counterexample) s += (s.empty() ? "" : " ") + name;
    std::cout << "closed loop: differs from the legal language on " << (s.empty() ? "ε" : s) << "\n";
  }
  if (sv.passed) {
    std::cout << "oracle (depth " << k << "): pass\n";
  } else {
    std::cout << "oracle (depth " << k << "): " << to_string(*sv.violation) << " at " << f.model.format(sv.string)
              << " with event " << f.model.name(*sv.event) << "\n";
  }
  return loop_error.empty() && eq.equal && sv.passed ? kHolds : kFails;
}

int cmd_export_dot(const std::string& file, bool composite) {
  ModelFile f = load_model(file);
  if (composite) std::cout << composite_dot(build_frame(f.model, f.profile));
  else std::cout << plant_dot(f.model);
  return kHolds;
}

int cmd_oracle(const std::string& file, const std::string& mode, const RunConfig& config,
               const std::string& dir) {
  validate(config);
  ModelFile f = load_model(file);
  const std::size_t k = config.depth.value_or(default_depth(f.model));
  KripkeFrame frame = build_frame(f.model, f.profile);

  if (mode == "condition") {
    bool agree = true;
    for (const auto& [name, id] : kConditions) {
      RunConfig rc = config;
      rc.condition = id;
      if (id != ConditionId::legacy) rc.relation.reset(), rc.worlds.reset(), rc.events.reset();
      CheckOptions options = validate(rc);
      bool checker = check(frame, options).holds;
      bool oracle = oracle_condition(f.model, f.profile, options);
      agree = agree && checker == oracle;
      std::cout << name << ": checker " << (checker ? "holds" : "fails") << ", oracle "
                << (oracle ? "holds" : "fails") << (checker == oracle ? "" : "  DISAGREE") << "\n";
    }
    return agree ? kHolds : kFails;
  }

  if (mode == "solve") {
    SynthesisResult result;
    try {
      result = supervisors_for(f, dir);
    } catch (const SynthesisFailure& e) {
      print_failure(frame, e, false);
      return kFails;
    }
    SolveVerdict sv = oracle_solves(f.model, f.profile, result, k);
    if (sv.passed) {
      std::cout << "pass (depth " << k << ")\n";
      return kHolds;
    }
    std::cout << to_string(*sv.violation) << " at " << f.model.format(sv.string) << " with event "
              << f.model.name(*sv.event) << "\n";
    return kFails;
  }

  std::mt19937 rng(config.seed.value_or(0));
  SearchResult found = exhaustive_supervisor_search(f.model, f.profile, k, config.seed ? &rng : nullptr);
  bool checker = check_controllability(frame).holds && check_inf_obs_extended(frame).holds;
  std::cout << "search (depth " << k << ", " << found.cells << " cells): "
            << (found.exists ? "supervisors exist" : "no supervisors") << "\n";
  std::cout << "checker: " << (checker ? "solvable" : "not solvable") << "\n";
  if (found.witness) std::cout << synthesis_json(f.model, *found.witness).dump(2) << "\n";
  return found.exists ? kHolds : kFails;
}

// --- simulate ------------------------------------------------------------------

int cmd_simulate(const std::string& file, const std::string& dir) {
  ModelFile f = load_model(file);
  KripkeFrame frame = build_frame(f.model, f.profile);
  const PlantSpec& m = f.model;
  std::optional<SynthesisResult> result;
  try {
    result = supervisors_for(f, dir);
  } catch (const SynthesisFailure& e) {
    std::cout << "no supervisors: " << e.what() << "; events are not gated\n";
  }

  const bool interactive = isatty(STDIN_FILENO);
  std::size_t w = 0;
  EventString trace;

  auto estimates = [&](std::size_t world) {
    return frame.composite().worlds[world].estimates;
  };
  auto gate = [&](EventId e, std::string& why) -> bool {
    if (!result) return true;
    try {
      return allowed(*result, f.profile, estimates(w), e);
    } catch (const Error& err) {
      why = err.what();
      return false;
    }
  };
  auto lookup = [&](const std::string& name) -> std::optional<EventId> {
    auto e = m.find_event(name);
    if (!e) std::cout << "unknown event '" << name << "'\n";
    return e;
  };

  std::cout << "at [" << frame.describe(w) << "]\n";
  std::string line;
  while (true) {
    if (interactive) std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    std::istringstream in(line);
    std::string cmd, arg;
    in >> cmd >> arg;
    if (cmd.empty()) continue;

    if (cmd == "quit" || cmd == "exit") break;
    if (cmd == "help") {
      std::cout << "events | step <event> | why <event> | estimates | reset | quit\n";
    } else if (cmd == "events") {
      for (EventId e : m.events_by_name()) {
        auto edge = m.step(frame.composite().worlds[w].plant, e);
        std::string why;
        std::cout << m.name(e) << ": " << (edge ? "possible" : "impossible");
        if (edge) {
          if (!f.profile.controllable(e)) std::cout << ", uncontrollable";
          else std::cout << (gate(e, why) ? ", enabled" : ", disabled");
          std::cout << (edge->legal ? ", legal" : ", illegal");
        }
        if (!why.empty()) std::cout << " (" << why << ")";
        std::cout << "\n";
      }
    } else if (cmd == "step") {
      auto e = lookup(arg);
      if (!e) continue;
      auto next = frame.composite().step(w, *e);
      if (!next) {
        std::cout << m.name(*e) << " is not possible here\n";
        continue;
      }
      std::string why;
      if (!gate(*e, why)) {
        std::cout << "refused: " << m.name(*e) << " is disabled";
        if (!why.empty()) {
          std::cout << " (" << why << ")\n";
          continue;
        }
        std::vector<std::string> blockers;
        for (std::size_t i : f.profile.controllers(*e)) {
          ControlDecision d = result->supervisors[i].decision(estimates(w)[i], *e);
          if (d == ControlDecision::off || d == ControlDecision::woff)
            blockers.push_back("supervisor " + std::to_string(i + 1) + " (" + std::string(to_string(d)) + ")");
        }
        if (blockers.empty()) std::cout << " by default";
        else std::cout << " by";
        for (std::size_t k = 0; k < blockers.size(); ++k) std::cout << (k ? ", " : " ") << blockers[k];
        std::cout << "\n";
        continue;
      }
      w = *next;
      trace.push_back(*e);
      std::cout << "at [" << frame.describe(w) << "] after " << m.format(trace)
                << (frame.legal(w) ? "" : " (illegal)") << "\n";
    } else if (cmd == "why") {
      auto e = lookup(arg);
      if (!e) continue;
      if (!result) {
        std::cout << "no supervisors loaded\n";
        continue;
      }
      std::cout << render_explanation(frame, explain(frame, *result, w, *e));
    } else if (cmd == "estimates") {
      for (std::size_t i = 0; i < frame.agents(); ++i)
        std::cout << "supervisor " << i + 1 << ": " << format_estimate(m, frame.composite().estimate(w, i)) << "\n";
    } else if (cmd == "reset") {
      w = 0;
      trace.clear();
      std::cout << "at [" << frame.describe(w) << "]\n";
    } else {
      std::cout << "unknown command '" << cmd << "'; try help\n";
    }
  }
  return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized supervisory control with knowledge-based supervisors"};
  app.require_subcommand(1);

  std::string file, dir, mode = "condition";
  RunConfig config;
  std::optional<std::size_t> depth;
  std::optional<std::uint32_t> seed;
  bool composite = false;

  std::string condition = "extended", relation, worlds, events;
  auto keys = [](const auto& table) {
    std::vector<std::string> out;
    for (const auto& [k, v] : table) out.push_back(k);
    return out;
  };
  auto add_condition_flags = [&](CLI::App* cmd) {
    cmd->add_option("--condition", condition, "Condition to decide")->check(CLI::IsMember(keys(kConditions)));
    cmd->add_option("--relation", relation, "Accessibility relation (legacy)")->check(CLI::IsMember(keys(kRelations)));
    cmd->add_option("--worlds", worlds, "World domain (legacy)")->check(CLI::IsMember(keys(kWorlds)));
    cmd->add_option("--events", events, "Event domain (legacy)")->check(CLI::IsMember(keys(kEvents)));
  };

  auto* check_cmd = app.add_subcommand("check", "Decide controllability or an observability condition");
  check_cmd->add_option("file", file, "Model file")->required();
  add_condition_flags(check_cmd);
  check_cmd->add_flag("--json", config.json, "Machine-readable output");

  auto* synth_cmd = app.add_subcommand("synthesize", "Build knowledge-based supervisors");
  synth_cmd->add_option("file", file, "Model file")->required();
  synth_cmd->add_option("-o,--output", dir, "Directory for supervisor files");
  synth_cmd->add_flag("--json", config.json, "Machine-readable output");

  auto* verify_cmd = app.add_subcommand("verify", "Check supervisors against the legal language");
  verify_cmd->add_option("file", file, "Model file")->required();
  verify_cmd->add_option("--supervisors", dir, "Directory written by synthesize")->required();
  verify_cmd->add_option("--depth", depth, "String depth for the oracle cross-check");

  auto* sim_cmd = app.add_subcommand("simulate", "Step through the closed loop interactively");
  sim_cmd->add_option("file", file, "Model file")->required();
  sim_cmd->add_option("--supervisors", dir, "Directory written by synthesize (default: synthesize)");

  auto* dot_cmd = app.add_subcommand("export-dot", "Print the plant or the composite as DOT");
  dot_cmd->add_option("file", file, "Model file")->required();
  dot_cmd->add_flag("--composite", composite, "Export G' instead of G");

  auto* oracle_cmd = app.add_subcommand("oracle", "Run the brute-force validators");
  oracle_cmd->add_option("file", file, "Model file")->required();
  oracle_cmd->add_option("--mode", mode, "condition, solve or search")
      ->check(CLI::IsMember({"condition", "solve", "search"}));
  oracle_cmd->add_option("--depth", depth, "String depth");
  oracle_cmd->add_option("--seed", seed, "Shuffle the search order");
  oracle_cmd->add_option("--supervisors", dir, "Supervisors to test in solve mode");
  add_condition_flags(oracle_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  config.condition = kConditions.at(condition);
  if (!relation.empty()) config.relation = kRelations.at(relation);
  if (!worlds.empty()) config.worlds = kWorlds.at(worlds);
  if (!events.empty()) config.events = kEvents.at(events);
  config.depth = depth;
  config.seed = seed;
  try {
    if (*check_cmd) return cmd_check(file, config);
    if (*synth_cmd) return cmd_synthesize(file, dir, config.json);
    if (*verify_cmd) return cmd_verify(file, dir, depth);
    if (*sim_cmd) return cmd_simulate(file, dir);
    if (*dot_cmd) return cmd_export_dot(file, composite);
    if (*oracle_cmd) return cmd_oracle(file, mode, config, dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
