#include "kbsc/kripke.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace kbsc {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

std::size_t slot(Relation rel) { return rel == Relation::partial ? 0 : 1; }

}  // namespace

KripkeFrame::KripkeFrame(Composite composite, PlantSpec model, SupervisionProfile profile)
    : composite_(std::move(composite)), model_(std::move(model)), profile_(std::move(profile)) {
  if (profile_.event_count() != model_.event_count())
    throw Error("profile and model disagree on the number of events");
  if (composite_.observers.size() != profile_.supervisors())
    throw Error("composite has " + std::to_string(composite_.observers.size()) +
                " observers but the profile has " + std::to_string(profile_.supervisors()) +
                " supervisors");

  for (EventId e : model_.events()) controllers_.push_back(profile_.controllers(e));

  classes_.assign(2, std::vector<std::vector<std::vector<std::size_t>>>(agents()));
  class_of_.assign(2, std::vector<std::vector<std::size_t>>(agents(), std::vector<std::size_t>(size(), npos)));
  for (Relation rel : {Relation::partial, Relation::total}) {
    for (std::size_t i = 0; i < agents(); ++i) {
      std::map<std::size_t, std::size_t> by_estimate;
      for (std::size_t w = 0; w < size(); ++w) {
        if (rel == Relation::partial && !legal(w)) continue;
        auto est = composite_.worlds[w].estimates[i];
        auto [it, fresh] = by_estimate.emplace(est, classes_[slot(rel)][i].size());
        if (fresh) classes_[slot(rel)][i].emplace_back();
        classes_[slot(rel)][i][it->second].push_back(w);
        class_of_[slot(rel)][i][w] = it->second;
      }
    }
  }

  for (std::size_t w = 0; w < size(); ++w) report_order_.push_back(w);
  std::stable_sort(report_order_.begin(), report_order_.end(), [&](std::size_t a, std::size_t b) {
    return shortlex_less(model_, witness(a), witness(b));
  });
  for (std::size_t w : report_order_)
    if (legal(w)) legal_order_.push_back(w);
}

bool KripkeFrame::holds(std::size_t w, const Proposition& p) const {
  if (p.kind == Proposition::Kind::world_legal) return legal(w);
  if (index(p.event) >= model_.event_count())
    throw UnknownEvent("proposition refers to unknown event #" + std::to_string(index(p.event)));
  auto edge = model_.step(composite_.worlds[w].plant, p.event);
  if (p.kind == Proposition::Kind::possible) return edge.has_value();
  return edge && edge->legal;
}

std::span<const std::size_t> KripkeFrame::alternatives(std::size_t w, std::size_t agent,
                                                       Relation rel) const {
  std::size_t c = class_of_[slot(rel)].at(agent).at(w);
  if (c == npos) return {};
  return classes_[slot(rel)][agent][c];
}

const std::vector<std::vector<std::size_t>>& KripkeFrame::classes(std::size_t agent,
                                                                  Relation rel) const {
  return classes_[slot(rel)].at(agent);
}

std::string KripkeFrame::describe(std::size_t w) const {
  std::string out = model_.name(composite_.worlds[w].plant);
  for (std::size_t i = 0; i < agents(); ++i) {
    out += " | {";
    bool first = true;
    for (StateId q : composite_.estimate(w, i)) {
      if (!first) out += ",";
      out += model_.name(q);
      first = false;
    }
    out += "}";
  }
  return out;
}

KripkeFrame build_frame(Composite composite, const PlantSpec& model,
                        const SupervisionProfile& profile) {
  return KripkeFrame(std::move(composite), model, profile);
}

KripkeFrame build_frame(const PlantSpec& model, const SupervisionProfile& profile) {
  return KripkeFrame(compose(model, profile), model, profile);
}

// --- evaluation -------------------------------------------------------------

const std::vector<char>& Evaluator::truth(const Formula& f) {
  auto it = memo_.find(f.node());
  if (it != memo_.end()) return it->second.values;
  auto values = compute(f);
  return memo_.insert_or_assign(f.node(), Entry{f.shared(), std::move(values)}).first->second.values;
}

std::vector<char> Evaluator::knowledge(std::size_t agent, const std::vector<char>& inner) const {
  if (agent >= frame_.agents())
    throw Error("knowledge operator refers to unknown agent " + std::to_string(agent + 1));
  // Illegal worlds under the partial relation have no alternatives: vacuous truth.
  std::vector<char> out(frame_.size(), 1);
  for (const auto& cls : frame_.classes(agent, rel_)) {
    bool all = std::all_of(cls.begin(), cls.end(), [&](std::size_t v) { return inner[v] != 0; });
    for (std::size_t v : cls) out[v] = all;
  }
  return out;
}

std::vector<char> Evaluator::compute(const Formula& f) {
  using Op = Formula::Op;
  const std::size_t n = frame_.size();
  std::vector<char> out(n, 0);
  switch (f.op()) {
    case Op::var:
      for (std::size_t w = 0; w < n; ++w) out[w] = frame_.holds(w, f.proposition());
      return out;
    case Op::negation: {
      const auto& a = truth(f.lhs());
      for (std::size_t w = 0; w < n; ++w) out[w] = !a[w];
      return out;
    }
    case Op::conjunction:
    case Op::disjunction:
    case Op::implication: {
      const auto& a = truth(f.lhs());
      const auto& b = truth(f.rhs());
      for (std::size_t w = 0; w < n; ++w) {
        if (f.op() == Op::conjunction) out[w] = a[w] && b[w];
        else if (f.op() == Op::disjunction) out[w] = a[w] || b[w];
        else out[w] = !a[w] || b[w];
      }
      return out;
    }
    case Op::knows:
      return knowledge(f.agent(), truth(f.lhs()));
    case Op::someone_knows:
    case Op::other_knows: {
      if (index(f.event()) >= frame_.model().event_count())
        throw UnknownEvent("macro refers to unknown event #" + std::to_string(index(f.event())));
      const auto& inner = truth(f.lhs());
      for (std::size_t j : frame_.controllers(f.event())) {
        if (f.op() == Op::other_knows && j == f.agent()) continue;
        auto k = knowledge(j, inner);
        for (std::size_t w = 0; w < n; ++w) out[w] = out[w] || k[w];
      }
      return out;
    }
  }
  return out;
}

bool eval(const KripkeFrame& frame, std::size_t w, const Formula& f, Relation rel) {
  Evaluator ev(frame, rel);
  return ev.eval(w, f);
}

}  // namespace kbsc
