#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kbsc/io.hpp"
#include "kbsc/oracle.hpp"
#include "kbsc/run_config.hpp"

namespace py = pybind11;
using namespace kbsc;

namespace {

// Everything crosses the boundary as JSON text; the Python side parses it.
std::string dump(const Json& j) { return j.dump(); }

ConditionId condition(const std::string& name) {
  auto c = parse_condition(name);
  if (!c) throw Error("unknown condition '" + name + "'");
  return *c;
}

CheckOptions options(const std::string& cond, std::optional<std::string> relation,
                     std::optional<std::string> worlds, std::optional<std::string> events) {
  RunConfig rc;
  rc.condition = condition(cond);
  if (relation) {
    if (*relation != "partial" && *relation != "total") throw Error("relation must be partial or total");
    rc.relation = *relation == "partial" ? Relation::partial : Relation::total;
  }
  if (worlds) {
    if (*worlds != "legal" && *worlds != "all") throw Error("worlds must be legal or all");
    rc.worlds = *worlds == "legal" ? WorldDomain::legal : WorldDomain::all;
  }
  if (events) {
    if (*events != "controllable" && *events != "all") throw Error("events must be controllable or all");
    rc.events = *events == "controllable" ? EventDomain::controllable : EventDomain::all;
  }
  return validate(rc);
}

ControlDecision decision(const std::string& s) {
  auto d = parse_control_decision(s);
  if (!d) throw Error("unknown control decision '" + s + "'");
  return *d;
}

}  // namespace

PYBIND11_MODULE(_kbsc, m) {
  m.doc() = "Decentralized supervisory control with knowledge-based conditions";

  auto base = py::register_exception<Error>(m, "KbscError");
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<BoundError>(m, "BoundError", base.ptr());

  py::class_<ModelFile>(m, "Model")
      .def_property_readonly("supervisors", [](const ModelFile& f) { return f.profile.supervisors(); })
      .def_property_readonly("events",
                             [](const ModelFile& f) {
                               std::vector<std::string> out;
                               for (EventId e : f.model.events()) out.push_back(f.model.name(e));
                               return out;
                             })
      .def_property_readonly("states",
                             [](const ModelFile& f) {
                               std::vector<std::string> out;
                               for (StateId q : f.model.states()) out.push_back(f.model.name(q));
                               return out;
                             })
      .def("serialize", [](const ModelFile& f) { return serialize_model(f.model, f.profile); })
      .def("__repr__", [](const ModelFile& f) {
        return "<Model " + std::to_string(f.model.state_count()) + " states, " +
               std::to_string(f.model.event_count()) + " events, " + std::to_string(f.profile.supervisors()) +
               " supervisors>";
      });

  m.def("parse_model", [](const std::string& text) { return parse_model(text); });
  m.def("load_model", [](const std::string& path) { return load_model(path); });

  m.def(
      "check_json",
      [](const ModelFile& f, const std::string& cond, std::optional<std::string> relation,
         std::optional<std::string> worlds, std::optional<std::string> events) {
        auto frame = build_frame(f.model, f.profile);
        return dump(verdict_json(frame, check(frame, options(cond, relation, worlds, events))));
      },
      py::arg("model"), py::arg("condition"), py::arg("relation") = py::none(), py::arg("worlds") = py::none(),
      py::arg("events") = py::none());

  m.def("oracle_condition",
        [](const ModelFile& f, const std::string& cond, std::optional<std::string> relation,
           std::optional<std::string> worlds, std::optional<std::string> events) {
          return oracle_condition(f.model, f.profile, options(cond, relation, worlds, events));
        },
        py::arg("model"), py::arg("condition"), py::arg("relation") = py::none(), py::arg("worlds") = py::none(),
        py::arg("events") = py::none());

  // {"ok": true, "result": {...}} or {"ok": false, "error": "...", "verdict": {...}}
  m.def("synthesize_json", [](const ModelFile& f) {
    auto frame = build_frame(f.model, f.profile);
    try {
      return dump(Json{{"ok", true}, {"result", synthesis_json(f.model, synthesize(frame))}});
    } catch (const SynthesisFailure& e) {
      return dump(Json{{"ok", false}, {"error", e.what()}, {"verdict", verdict_json(frame, e.verdict())}});
    }
  });

  m.def("verify_json", [](const ModelFile& f, const std::string& supervisors) {
    auto r = supervisors_from_json(Json::parse(supervisors), f.model, f.profile);
    auto eq = verify_solution(f.model, f.profile, r);
    return dump(Json{{"equal", eq.equal}, {"counterexample", eq.counterexample}});
  });

  m.def("oracle_solves_json", [](const ModelFile& f, const std::string& supervisors, std::size_t depth) {
    auto r = supervisors_from_json(Json::parse(supervisors), f.model, f.profile);
    auto v = oracle_solves(f.model, f.profile, r, depth);
    Json out{{"passed", v.passed}, {"string", join_events(f.model, v.string)}};
    out["event"] = v.event ? Json(f.model.name(*v.event)) : Json(nullptr);
    out["violation"] = v.violation ? Json(std::string(to_string(*v.violation))) : Json(nullptr);
    return dump(out);
  });

  m.def("search_exists", [](const ModelFile& f, std::size_t depth) {
    return exhaustive_supervisor_search(f.model, f.profile, depth).exists;
  });

  m.def("fuse", [](const std::vector<std::string>& bag, const std::string& dft) {
    auto d = parse_fused_decision(dft);
    if (!d) throw Error("default must be enable or disable");
    std::vector<ControlDecision> cds;
    for (const auto& s : bag) cds.push_back(decision(s));
    return std::string(to_string(fuse(cds, *d)));
  });
  m.def("fuse_four_valued", [](const std::string& a, const std::string& b) {
    return std::string(to_string(fuse_four_valued(decision(a), decision(b))));
  });

  m.def("plant_dot", [](const ModelFile& f) { return plant_dot(f.model); });
  m.def("composite_dot", [](const ModelFile& f) { return composite_dot(build_frame(f.model, f.profile)); });
}
