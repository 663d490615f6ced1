#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "kbsc/automata.hpp"

namespace kbsc {

/// Atomic propositions of the frame: σ_G ("σ is physically possible"),
/// σ_E ("σ is legal") and w_E ("the world is legal").
struct Proposition {
  enum class Kind { possible, legal_event, world_legal };
  Kind kind = Kind::world_legal;
  EventId event{};

  friend bool operator==(const Proposition&, const Proposition&) = default;
};

struct FormulaNode;

/// Immutable epistemic formula. Subtrees are shared, so copies are cheap.
class Formula {
 public:
  enum class Op {
    var,
    negation,
    conjunction,
    disjunction,
    implication,
    knows,
    someone_knows,
    other_knows,
  };

  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

  Op op() const;
  const Proposition& proposition() const;
  /// Agent of `knows`, or the excluded agent of `other_knows`.
  std::size_t agent() const;
  /// Event whose controllers `someone_knows` / `other_knows` range over.
  EventId event() const;
  Formula lhs() const;
  Formula rhs() const;

  /// Identity of the shared node; used as a memo key.
  const FormulaNode* node() const { return node_.get(); }
  const std::shared_ptr<const FormulaNode>& shared() const { return node_; }
  std::size_t depth() const;

 private:
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  Formula::Op op;
  Proposition prop;
  std::size_t agent = 0;
  EventId event{};
  std::shared_ptr<const FormulaNode> lhs;
  std::shared_ptr<const FormulaNode> rhs;
};

Formula var(Proposition p);
Formula possible(EventId e);
Formula legal_event(EventId e);
Formula world_legal();

Formula neg(Formula a);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
/// K_i φ
Formula knows(std::size_t agent, Formula a);
/// S φ: some controller of σ knows φ.
Formula someone_knows(EventId sigma, Formula a);
/// O φ: some controller of σ other than `excluded` knows φ.
Formula other_knows(EventId sigma, std::size_t excluded, Formula a);

bool uses_world_legal(const Formula& f);

/// Rewrites φ so that evaluation under total accessibility agrees with φ
/// under partial accessibility at legal worlds: every K_i ψ becomes
/// K_i(w_E ⟹ ψ') and the root becomes w_E ⟹ φ'. Throws Error when φ already
/// mentions w_E.
Formula guard_transform(const Formula& f);

/// Structural equality.
bool same_formula(const Formula& a, const Formula& b);

/// Human-readable rendering; agents are printed 1-based.
std::string to_string(const Formula& f, const PlantSpec& model);

}  // namespace kbsc
