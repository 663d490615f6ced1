#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "kbsc/automata.hpp"
#include "kbsc/formula.hpp"
#include "kbsc/observation.hpp"

namespace kbsc {

/// Which accessibility family a knowledge operator quantifies over.
///  - partial: w ∼_i w' iff both worlds are legal and share supervisor i's
///    estimate. Illegal worlds have no alternatives, so K_i φ holds there.
///  - total:   w ≃_i w' iff the worlds share supervisor i's estimate.
enum class Relation { partial, total };

/// Worlds of G' with valuation and both accessibility families. Carries its
/// own copy of the model and profile, so it is self-contained and immutable.
class KripkeFrame {
 public:
  KripkeFrame(Composite composite, PlantSpec model, SupervisionProfile profile);

  std::size_t size() const { return composite_.size(); }
  std::size_t agents() const { return profile_.supervisors(); }

  const PlantSpec& model() const { return model_; }
  const SupervisionProfile& profile() const { return profile_; }
  const Composite& composite() const { return composite_; }

  bool legal(std::size_t w) const { return composite_.legal[w]; }
  /// π(w, p)
  bool holds(std::size_t w, const Proposition& p) const;

  /// [w]_i under the chosen relation, in world order. Empty for illegal worlds
  /// under the partial relation.
  std::span<const std::size_t> alternatives(std::size_t w, std::size_t agent, Relation rel) const;
  /// Equivalence classes of the relation (illegal worlds are omitted under
  /// the partial relation).
  const std::vector<std::vector<std::size_t>>& classes(std::size_t agent, Relation rel) const;

  /// N_σ
  std::span<const std::size_t> controllers(EventId e) const { return controllers_.at(index(e)); }

  /// Legal worlds ordered by their witness strings (shortlex, events by name).
  const std::vector<std::size_t>& legal_worlds() const { return legal_order_; }
  /// All worlds in the same order, legal or not.
  const std::vector<std::size_t>& report_order() const { return report_order_; }
  const EventString& witness(std::size_t w) const { return composite_.witness[w]; }

  /// "q | {..} | {..}": plant state followed by each estimate.
  std::string describe(std::size_t w) const;

 private:
  Composite composite_;
  PlantSpec model_;
  SupervisionProfile profile_;
  std::vector<std::vector<std::size_t>> controllers_;
  // [relation][agent] -> classes, and world -> class index (or npos).
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> classes_;
  std::vector<std::vector<std::vector<std::size_t>>> class_of_;
  std::vector<std::size_t> legal_order_;
  std::vector<std::size_t> report_order_;
};

KripkeFrame build_frame(Composite composite, const PlantSpec& model, const SupervisionProfile& profile);

/// Projects, composes and builds the frame in one step.
KripkeFrame build_frame(const PlantSpec& model, const SupervisionProfile& profile);

/// Formula evaluator over one frame and one relation. Truth values of each
/// subformula are computed for all worlds at once and cached by node; the
/// cache never changes results.
class Evaluator {
 public:
  Evaluator(const KripkeFrame& frame, Relation rel) : frame_(frame), rel_(rel) {}

  bool eval(std::size_t w, const Formula& f) { return truth(f)[w]; }
  /// Truth value of f at every world.
  const std::vector<char>& truth(const Formula& f);

  Relation relation() const { return rel_; }
  const KripkeFrame& frame() const { return frame_; }

 private:
  std::vector<char> compute(const Formula& f);
  std::vector<char> knowledge(std::size_t agent, const std::vector<char>& inner) const;

  const KripkeFrame& frame_;
  Relation rel_;
  struct Entry {
    std::shared_ptr<const FormulaNode> keep_alive;
    std::vector<char> values;
  };
  std::unordered_map<const FormulaNode*, Entry> memo_;
};

/// One-shot evaluation of φ at world w.
bool eval(const KripkeFrame& frame, std::size_t w, const Formula& f, Relation rel);

}  // namespace kbsc
