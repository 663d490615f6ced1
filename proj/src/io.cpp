#include "kbsc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace kbsc {

// --- model text format --------------------------------------------------------

namespace {

struct Token {
  std::string text;
  SourceLocation where;
};

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == line.size()) break;
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    out.push_back({std::string(line.substr(start, pos - start)), {line_no, start + 1}});
  }
  return out;
}

std::size_t parse_index(std::string_view s, SourceLocation where) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ModelError("expected a positive integer, got '" + std::string(s) + "'", where);
  return v;
}

struct EventDecl {
  Token name;
  std::vector<std::pair<std::size_t, SourceLocation>> obs, ctrl;
};

struct TransDecl {
  Token src, event, dst;
  bool legal = false;
};

}  // namespace

ModelFile parse_model(std::string_view text) {
  std::optional<std::size_t> supervisors;
  SourceLocation supervisors_at;
  std::vector<EventDecl> events;
  std::vector<TransDecl> transitions;
  PlantBuilder b;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;

    auto tok = tokenize(line, line_no);
    if (tok.empty()) continue;
    const std::string& kw = tok[0].text;
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (tok.size() - 1 < lo || tok.size() - 1 > hi)
        throw ModelError("'" + kw + "' takes " + (lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi)) +
                             " arguments, got " + std::to_string(tok.size() - 1),
                         tok[0].where);
    };

    if (kw == "supervisors") {
      arity(1, 1);
      if (supervisors) throw ModelError("'supervisors' given twice", tok[0].where);
      supervisors = parse_index(tok[1].text, tok[1].where);
      supervisors_at = tok[1].where;
      if (*supervisors == 0) throw ModelError("at least one supervisor is required", tok[1].where);
    } else if (kw == "event") {
      arity(1, 3);
      EventDecl d{tok[1], {}, {}};
      b.add_event(tok[1].text, tok[1].where);
      for (std::size_t k = 2; k < tok.size(); ++k) {
        const std::string& opt = tok[k].text;
        auto eq = opt.find('=');
        std::string key = opt.substr(0, eq);
        if (eq == std::string::npos || (key != "obs" && key != "ctrl"))
          throw ModelError("expected obs=<i,...> or ctrl=<i,...>, got '" + opt + "'", tok[k].where);
        auto& list = key == "obs" ? d.obs : d.ctrl;
        if (!list.empty()) throw ModelError("'" + key + "' given twice", tok[k].where);
        std::string_view rest = std::string_view(opt).substr(eq + 1);
        std::size_t col = tok[k].where.column + eq + 1;
        while (!rest.empty()) {
          auto comma = rest.find(',');
          auto item = rest.substr(0, comma);
          SourceLocation at{line_no, col};
          list.push_back({parse_index(item, at), at});
          if (comma == std::string_view::npos) break;
          rest.remove_prefix(comma + 1);
          col += comma + 1;
        }
      }
      events.push_back(std::move(d));
    } else if (kw == "state") {
      arity(1, 3);
      bool init = false, legal = false;
      for (std::size_t k = 2; k < tok.size(); ++k) {
        bool& flag = tok[k].text == "init" ? init : legal;
        if (tok[k].text != "init" && tok[k].text != "legal")
          throw ModelError("expected 'init' or 'legal', got '" + tok[k].text + "'", tok[k].where);
        if (flag) throw ModelError("'" + tok[k].text + "' given twice", tok[k].where);
        flag = true;
      }
      StateId q = b.add_state(tok[1].text, legal, tok[1].where);
      if (init) b.set_initial(q, tok[1].where);
    } else if (kw == "trans") {
      arity(3, 4);
      TransDecl t{tok[1], tok[2], tok[3], false};
      if (tok.size() == 5) {
        if (tok[4].text != "legal") throw ModelError("expected 'legal', got '" + tok[4].text + "'", tok[4].where);
        t.legal = true;
      }
      transitions.push_back(std::move(t));
    } else {
      throw ModelError("unknown keyword '" + kw + "'", tok[0].where);
    }
  }

  if (!supervisors) throw ModelError("missing 'supervisors <n>' line");

  for (const auto& t : transitions) {
    auto src = b.find_state(t.src.text);
    if (!src) throw ModelError("undefined state '" + t.src.text + "'", t.src.where);
    auto ev = b.find_event(t.event.text);
    if (!ev) throw ModelError("undefined event '" + t.event.text + "'", t.event.where);
    auto dst = b.find_state(t.dst.text);
    if (!dst) throw ModelError("undefined state '" + t.dst.text + "'", t.dst.where);
    b.add_transition(*src, *ev, *dst, t.legal, t.src.where);
  }
  PlantSpec model = b.build();

  SupervisionProfile profile(*supervisors, model.event_count());
  for (const auto& d : events) {
    EventId e = *model.find_event(d.name.text);
    for (auto [i, at] : d.obs) {
      if (i < 1 || i > *supervisors)
        throw ModelError("supervisor " + std::to_string(i) + " out of range 1.." + std::to_string(*supervisors), at);
      profile.set_observable(i - 1, e);
    }
    for (auto [i, at] : d.ctrl) {
      if (i < 1 || i > *supervisors)
        throw ModelError("supervisor " + std::to_string(i) + " out of range 1.." + std::to_string(*supervisors), at);
      profile.set_controllable(i - 1, e);
    }
  }
  return {std::move(model), std::move(profile)};
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const PlantSpec& model, const SupervisionProfile& profile) {
  std::string out = "supervisors " + std::to_string(profile.supervisors()) + "\n";
  auto list = [&](EventId e, bool obs) {
    std::string s;
    for (std::size_t i = 0; i < profile.supervisors(); ++i) {
      if (obs ? !profile.observes(i, e) : !profile.controls(i, e)) continue;
      s += (s.empty() ? "" : ",") + std::to_string(i + 1);
    }
    return s;
  };
  for (EventId e : model.events()) {
    out += "event " + model.name(e);
    if (auto s = list(e, true); !s.empty()) out += " obs=" + s;
    if (auto s = list(e, false); !s.empty()) out += " ctrl=" + s;
    out += "\n";
  }
  for (StateId q : model.states()) {
    out += "state " + model.name(q);
    if (q == model.initial()) out += " init";
    if (model.is_legal(q)) out += " legal";
    out += "\n";
  }
  for (StateId q : model.states())
    for (EventId e : model.events())
      if (auto edge = model.step(q, e))
        out += "trans " + model.name(q) + " " + model.name(e) + " " + model.name(edge->target) +
               (edge->legal ? " legal" : "") + "\n";
  return out;
}

std::string join_events(const PlantSpec& model, const EventString& s) {
  return s.empty() ? std::string() : model.format(s);
}

std::string format_estimate(const PlantSpec& model, const Estimate& est) {
  std::vector<std::string> names;
  for (StateId q : est) names.push_back(model.name(q));
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (std::size_t k = 0; k < names.size(); ++k) out += (k ? "," : "") + names[k];
  return out + "}";
}

// --- verdicts ------------------------------------------------------------------

namespace {

Json world_json(const KripkeFrame& frame, std::size_t w) {
  return Json{{"string", join_events(frame.model(), frame.witness(w))}, {"world", frame.describe(w)}};
}

}  // namespace

Json defaults_json(const PlantSpec& model, const std::map<EventId, FusedDecision>& defaults) {
  Json out = Json::object();
  std::vector<std::pair<std::string, FusedDecision>> named;
  for (auto [e, d] : defaults) named.emplace_back(model.name(e), d);
  std::sort(named.begin(), named.end());
  for (auto& [name, d] : named) out[name] = to_string(d);
  return out;
}

std::string format_defaults(const PlantSpec& model, const std::map<EventId, FusedDecision>& defaults) {
  std::string out;
  Json j = defaults_json(model, defaults);
  for (auto& [name, d] : j.items()) out += (out.empty() ? "" : " ") + name + "=" + d.get<std::string>();
  return out;
}

Json verdict_json(const KripkeFrame& frame, const Verdict& v) {
  Json out;
  out["condition"] = to_string(v.condition);
  out["holds"] = v.holds;
  out["defaults"] = defaults_json(frame.model(), v.defaults);
  if (!v.counterexample) {
    out["counterexample"] = nullptr;
    return out;
  }
  const auto& cx = *v.counterexample;
  Json c = world_json(frame, cx.world);
  c["event"] = frame.model().name(cx.event);
  if (cx.needs_enable) c["needs_enable"] = world_json(frame, *cx.needs_enable);
  if (cx.needs_disable) c["needs_disable"] = world_json(frame, *cx.needs_disable);
  out["counterexample"] = std::move(c);
  return out;
}

std::string render_verdict(const KripkeFrame& frame, const Verdict& v) {
  const PlantSpec& m = frame.model();
  std::string out = std::string(to_string(v.condition)) + ": " + (v.holds ? "holds" : "fails") + "\n";
  if (!v.defaults.empty()) {
    out += "defaults: " + format_defaults(m, v.defaults) + "\n";
  }
  if (v.counterexample) {
    const auto& cx = *v.counterexample;
    auto at = [&](std::size_t w) { return "[" + frame.describe(w) + "] after " + m.format(frame.witness(w)); };
    out += "counterexample: event " + m.name(cx.event) + " at " + at(cx.world) + "\n";
    if (cx.needs_enable) out += "  needs enable:  " + at(*cx.needs_enable) + "\n";
    if (cx.needs_disable) out += "  needs disable: " + at(*cx.needs_disable) + "\n";
  }
  return out;
}

// --- supervisors ----------------------------------------------------------------

Json supervisor_json(const PlantSpec& model, const Supervisor& sup) {
  Json out;
  out["supervisor"] = sup.index + 1;
  Json table = Json::array();
  for (std::size_t s = 0; s < sup.table.size(); ++s) {
    std::vector<std::string> names;
    for (StateId q : sup.observer.states[s]) names.push_back(model.name(q));
    std::sort(names.begin(), names.end());
    Json row;
    row["estimate"] = names;
    Json decisions = Json::object(), cases = Json::object();
    std::vector<std::pair<std::string, EventId>> events;
    for (auto& [e, d] : sup.table[s]) events.emplace_back(model.name(e), e);
    std::sort(events.begin(), events.end());
    for (auto& [name, e] : events) {
      decisions[name] = to_string(sup.table[s].at(e));
      if (s < sup.provenance.size())
        if (auto it = sup.provenance[s].find(e); it != sup.provenance[s].end())
          cases[name] = to_string(it->second);
    }
    row["decisions"] = std::move(decisions);
    if (!cases.empty()) row["cases"] = std::move(cases);
    table.push_back(std::move(row));
  }
  out["table"] = std::move(table);
  return out;
}

Json synthesis_json(const PlantSpec& model, const SynthesisResult& result) {
  Json out;
  out["defaults"] = defaults_json(model, result.defaults);
  Json sups = Json::array();
  for (const auto& s : result.supervisors) sups.push_back(supervisor_json(model, s));
  out["supervisors"] = std::move(sups);
  return out;
}

void save_supervisors(const std::filesystem::path& dir, const PlantSpec& model,
                      const SynthesisResult& result) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& p, const Json& j) {
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    out << j.dump(2) << "\n";
  };
  for (const auto& s : result.supervisors)
    write(dir / ("supervisor_" + std::to_string(s.index + 1) + ".json"), supervisor_json(model, s));
  write(dir / "defaults.json", Json{{"defaults", defaults_json(model, result.defaults)}});
}

SynthesisResult supervisors_from_json(const Json& doc, const PlantSpec& model,
                                      const SupervisionProfile& profile) {
  auto event = [&](const std::string& name) {
    auto e = model.find_event(name);
    if (!e) throw UnknownEvent("unknown event '" + name + "'");
    return *e;
  };
  SynthesisResult out;
  try {
    for (auto& [name, d] : doc.at("defaults").items()) {
      auto fd = parse_fused_decision(d.get<std::string>());
      if (!fd) throw Error("bad default '" + d.get<std::string>() + "' for " + name);
      out.defaults[event(name)] = *fd;
    }
    const Json& sups = doc.at("supervisors");
    if (sups.size() != profile.supervisors())
      throw Error("expected " + std::to_string(profile.supervisors()) + " supervisors, found " +
                  std::to_string(sups.size()));
    for (std::size_t i = 0; i < profile.supervisors(); ++i) {
      const Json& js = sups[i];
      if (js.at("supervisor").get<std::size_t>() != i + 1)
        throw Error("supervisor entries must be listed in order 1.." + std::to_string(profile.supervisors()));
      Supervisor sup;
      sup.index = i;
      sup.observer = project(model, profile, i);
      sup.table.resize(sup.observer.states.size());
      for (const Json& row : js.at("table")) {
        Estimate est;
        for (const Json& n : row.at("estimate")) {
          auto q = model.find_state(n.get<std::string>());
          if (!q) throw Error("unknown state '" + n.get<std::string>() + "'");
          est.push_back(*q);
        }
        std::sort(est.begin(), est.end());
        auto s = sup.observer.find(est);
        if (!s)
          throw Error("supervisor " + std::to_string(i + 1) + ": " + format_estimate(model, est) +
                      " is not a state of its observer");
        for (auto& [name, d] : row.at("decisions").items()) {
          EventId e = event(name);
          if (!profile.controls(i, e))
            throw Error("supervisor " + std::to_string(i + 1) + " does not control " + name);
          auto cd = parse_control_decision(d.get<std::string>());
          if (!cd) throw Error("bad decision '" + d.get<std::string>() + "'");
          sup.table[*s][e] = *cd;
        }
        if (row.contains("cases")) {
          sup.provenance.resize(sup.observer.states.size());
          for (auto& [name, c] : row.at("cases").items()) {
            auto pc = parse_policy_case(c.get<std::string>());
            if (!pc) throw Error("bad case '" + c.get<std::string>() + "'");
            sup.provenance[*s][event(name)] = *pc;
          }
        }
      }
      out.supervisors.push_back(std::move(sup));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed supervisor file: ") + e.what());
  }
  return out;
}

SynthesisResult load_supervisors(const std::filesystem::path& dir, const PlantSpec& model,
                                 const SupervisionProfile& profile) {
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open " + p.string());
    try {
      return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(p.string() + ": " + e.what());
    }
  };
  Json doc;
  doc["defaults"] = read(dir / "defaults.json").at("defaults");
  doc["supervisors"] = Json::array();
  for (std::size_t i = 1; i <= profile.supervisors(); ++i)
    doc["supervisors"].push_back(read(dir / ("supervisor_" + std::to_string(i) + ".json")));
  return supervisors_from_json(doc, model, profile);
}

// --- explanations ------------------------------------------------------------------

Explanation explain(const KripkeFrame& frame, const SynthesisResult& result, std::size_t w,
                    EventId sigma) {
  Explanation x;
  x.world = w;
  x.event = sigma;
  x.possible = frame.model().step(frame.composite().worlds.at(w).plant, sigma).has_value();
  x.controllable = frame.profile().controllable(sigma);
  if (!x.controllable) return x;

  KnowledgeBase kb(frame);
  const auto& states = frame.composite().worlds[w].estimates;
  for (std::size_t i : frame.controllers(sigma)) {
    SupervisorExplanation s;
    s.supervisor = i;
    s.estimate = frame.composite().estimate(w, i);
    auto alt = frame.alternatives(w, i, Relation::partial);
    s.alternatives.assign(alt.begin(), alt.end());
    s.truths = kb.truths(w, i, sigma);
    s.policy = policy_from(s.truths);
    s.decision = result.supervisors.at(i).decision(states[i], sigma);
    x.bag.push_back(s.decision);
    x.supervisors.push_back(std::move(s));
  }
  if (auto it = result.defaults.find(sigma); it != result.defaults.end()) x.dft = it->second;
  try {
    x.fused = fuse(x.bag, x.dft);
  } catch (const Error& e) {
    x.fusion_error = e.what();
  }
  return x;
}

std::string describe_case(PolicyCase c, std::size_t supervisor) {
  std::string k = "K" + std::to_string(supervisor + 1);
  switch (c) {
    case PolicyCase::knows_enable:
      return k + " e";
    case PolicyCase::knows_disable:
      return k + " d";
    case PolicyCase::bets_enable:
      return k + "(d̄ ⟹ O d)";
    case PolicyCase::bets_disable:
      return k + "(ē ⟹ O e)";
    case PolicyCase::others_cover:
      return k + "(ē ⟹ O e) and " + k + "(d̄ ⟹ O d)";
    case PolicyCase::knows_both:
      return k + " e and " + k + " d, the event cannot occur";
    case PolicyCase::no_knowledge:
      return "no knowledge line holds";
    case PolicyCase::no_legal_world:
      return "estimate only reached by illegal strings";
  }
  return "?";
}

std::string render_explanation(const KripkeFrame& frame, const Explanation& x) {
  const PlantSpec& m = frame.model();
  std::string out = "event " + m.name(x.event) + " at [" + frame.describe(x.world) + "] after " +
                    m.format(frame.witness(x.world)) + "\n";
  if (!x.controllable) return out + "  uncontrollable; always allowed\n";
  if (!x.possible) out += "  (not possible here)\n";
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  for (const auto& s : x.supervisors) {
    std::string k = "K" + std::to_string(s.supervisor + 1);
    out += "supervisor " + std::to_string(s.supervisor + 1) + ": estimate " + format_estimate(m, s.estimate) + "\n";
    out += "  indistinguishable:";
    if (s.alternatives.empty()) out += " none (illegal world)";
    for (std::size_t v : s.alternatives) out += " [" + frame.describe(v) + "]";
    out += "\n";
    out += "  " + k + " e: " + yn(s.truths.knows_enable) + ", " + k + " d: " + yn(s.truths.knows_disable) +
           ", " + k + "(ē ⟹ O e): " + yn(s.truths.enable_covered) + ", " + k +
           "(d̄ ⟹ O d): " + yn(s.truths.disable_covered) + "\n";
    out += "  decision: " + std::string(to_string(s.decision)) + " via " +
           describe_case(s.policy.why, s.supervisor);
    if (s.decision != s.policy.decision)
      out += " (table overrides policy " + std::string(to_string(s.policy.decision)) + ")";
    out += "\n";
  }
  out += "fused: ";
  if (x.fused) out += std::string(to_string(*x.fused));
  else out += "error: " + x.fusion_error;
  out += " (default " + std::string(to_string(x.dft)) + ")\n";
  return out;
}

// --- DOT ---------------------------------------------------------------------------

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string plant_dot(const PlantSpec& model) {
  std::string out = "digraph G {\n  rankdir=LR;\n  node [shape=circle];\n  __start [shape=point];\n";
  for (StateId q : model.states())
    out += "  " + quote(model.name(q)) + (model.is_legal(q) ? " [shape=doublecircle]" : "") + ";\n";
  out += "  __start -> " + quote(model.name(model.initial())) + ";\n";
  for (StateId q : model.states())
    for (EventId e : model.events())
      if (auto edge = model.step(q, e))
        out += "  " + quote(model.name(q)) + " -> " + quote(model.name(edge->target)) + " [label=" +
               quote(model.name(e)) + (edge->legal ? "" : ", style=dashed") + "];\n";
  return out + "}\n";
}

std::string composite_dot(const KripkeFrame& frame) {
  const PlantSpec& m = frame.model();
  const Composite& c = frame.composite();
  std::string out = "digraph Gprime {\n  rankdir=LR;\n  node [shape=circle];\n  __start [shape=point];\n";
  for (std::size_t w = 0; w < c.size(); ++w) {
    std::string label = m.name(c.worlds[w].plant);
    for (std::size_t i = 0; i < frame.agents(); ++i) label += "\n" + format_estimate(m, c.estimate(w, i));
    out += "  w" + std::to_string(w) + " [label=" + quote(label) +
           (frame.legal(w) ? ", shape=doublecircle" : "") + "];\n";
  }
  out += "  __start -> w0;\n";
  for (std::size_t w = 0; w < c.size(); ++w)
    for (EventId e : m.events())
      if (auto v = c.step(w, e)) {
        bool legal = m.step(c.worlds[w].plant, e)->legal;
        out += "  w" + std::to_string(w) + " -> w" + std::to_string(*v) + " [label=" + quote(m.name(e)) +
               (legal ? "" : ", style=dashed") + "];\n";
      }
  return out + "}\n";
}

}  // namespace kbsc
