#include "kbsc/formula.hpp"

#include <algorithm>

namespace kbsc {

namespace {

Formula make(Formula::Op op, std::shared_ptr<const FormulaNode> lhs = nullptr,
             std::shared_ptr<const FormulaNode> rhs = nullptr, std::size_t agent = 0,
             EventId event = {}) {
  auto node = std::make_shared<FormulaNode>();
  node->op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  node->agent = agent;
  node->event = event;
  return Formula(std::move(node));
}

}  // namespace

Formula::Op Formula::op() const { return node_->op; }
const Proposition& Formula::proposition() const { return node_->prop; }
std::size_t Formula::agent() const { return node_->agent; }
EventId Formula::event() const { return node_->event; }

Formula Formula::lhs() const { return Formula(node_->lhs); }
Formula Formula::rhs() const { return Formula(node_->rhs); }

std::size_t Formula::depth() const {
  switch (op()) {
    case Op::var:
      return 0;
    case Op::negation:
    case Op::knows:
    case Op::someone_knows:
    case Op::other_knows:
      return 1 + lhs().depth();
    default:
      return 1 + std::max(lhs().depth(), rhs().depth());
  }
}

Formula var(Proposition p) {
  auto node = std::make_shared<FormulaNode>();
  node->op = Formula::Op::var;
  node->prop = p;
  return Formula(std::move(node));
}

Formula possible(EventId e) { return var({Proposition::Kind::possible, e}); }
Formula legal_event(EventId e) { return var({Proposition::Kind::legal_event, e}); }
Formula world_legal() { return var({Proposition::Kind::world_legal, {}}); }

Formula neg(Formula a) { return make(Formula::Op::negation, a.shared()); }
Formula conj(Formula a, Formula b) { return make(Formula::Op::conjunction, a.shared(), b.shared()); }
Formula disj(Formula a, Formula b) { return make(Formula::Op::disjunction, a.shared(), b.shared()); }
Formula implies(Formula a, Formula b) {
  return make(Formula::Op::implication, a.shared(), b.shared());
}
Formula knows(std::size_t agent, Formula a) {
  return make(Formula::Op::knows, a.shared(), nullptr, agent);
}
Formula someone_knows(EventId sigma, Formula a) {
  return make(Formula::Op::someone_knows, a.shared(), nullptr, 0, sigma);
}
Formula other_knows(EventId sigma, std::size_t excluded, Formula a) {
  return make(Formula::Op::other_knows, a.shared(), nullptr, excluded, sigma);
}

bool uses_world_legal(const Formula& f) {
  switch (f.op()) {
    case Formula::Op::var:
      return f.proposition().kind == Proposition::Kind::world_legal;
    case Formula::Op::negation:
    case Formula::Op::knows:
    case Formula::Op::someone_knows:
    case Formula::Op::other_knows:
      return uses_world_legal(f.lhs());
    default:
      return uses_world_legal(f.lhs()) || uses_world_legal(f.rhs());
  }
}

namespace {

Formula guard_inner(const Formula& f) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::var:
      return f;
    case Op::negation:
      return neg(guard_inner(f.lhs()));
    case Op::conjunction:
      return conj(guard_inner(f.lhs()), guard_inner(f.rhs()));
    case Op::disjunction:
      return disj(guard_inner(f.lhs()), guard_inner(f.rhs()));
    case Op::implication:
      return implies(guard_inner(f.lhs()), guard_inner(f.rhs()));
    case Op::knows:
      return knows(f.agent(), implies(world_legal(), guard_inner(f.lhs())));
    case Op::someone_knows:
      return someone_knows(f.event(), implies(world_legal(), guard_inner(f.lhs())));
    case Op::other_knows:
      return other_knows(f.event(), f.agent(), implies(world_legal(), guard_inner(f.lhs())));
  }
  return f;
}

}  // namespace

Formula guard_transform(const Formula& f) {
  if (uses_world_legal(f)) throw Error("guard_transform: formula already mentions w_E");
  return implies(world_legal(), guard_inner(f));
}

bool same_formula(const Formula& a, const Formula& b) {
  if (a.op() != b.op()) return false;
  using Op = Formula::Op;
  switch (a.op()) {
    case Op::var:
      return a.proposition() == b.proposition();
    case Op::negation:
      return same_formula(a.lhs(), b.lhs());
    case Op::knows:
      return a.agent() == b.agent() && same_formula(a.lhs(), b.lhs());
    case Op::someone_knows:
      return a.event() == b.event() && same_formula(a.lhs(), b.lhs());
    case Op::other_knows:
      return a.event() == b.event() && a.agent() == b.agent() && same_formula(a.lhs(), b.lhs());
    default:
      return same_formula(a.lhs(), b.lhs()) && same_formula(a.rhs(), b.rhs());
  }
}

std::string to_string(const Formula& f, const PlantSpec& model) {
  using Op = Formula::Op;
  auto ev = [&](EventId e) {
    return index(e) < model.event_count() ? model.name(e) : "#" + std::to_string(index(e));
  };
  switch (f.op()) {
    case Op::var:
      switch (f.proposition().kind) {
        case Proposition::Kind::possible:
          return ev(f.proposition().event) + "_G";
        case Proposition::Kind::legal_event:
          return ev(f.proposition().event) + "_E";
        case Proposition::Kind::world_legal:
          return "w_E";
      }
      break;
    case Op::negation:
      return "¬" + to_string(f.lhs(), model);
    case Op::conjunction:
      return "(" + to_string(f.lhs(), model) + " ∧ " + to_string(f.rhs(), model) + ")";
    case Op::disjunction:
      return "(" + to_string(f.lhs(), model) + " ∨ " + to_string(f.rhs(), model) + ")";
    case Op::implication:
      return "(" + to_string(f.lhs(), model) + " ⟹ " + to_string(f.rhs(), model) + ")";
    case Op::knows:
      return "K" + std::to_string(f.agent() + 1) + " " + to_string(f.lhs(), model);
    case Op::someone_knows:
      return "S[" + ev(f.event()) + "] " + to_string(f.lhs(), model);
    case Op::other_knows:
      return "O[" + ev(f.event()) + "\\" + std::to_string(f.agent() + 1) + "] " +
             to_string(f.lhs(), model);
  }
  return "?";
}

}  // namespace kbsc
