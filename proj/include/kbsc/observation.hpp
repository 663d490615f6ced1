#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kbsc/automata.hpp"

namespace kbsc {

/// A supervisor's estimate of the current plant state: a sorted, duplicate
/// free set of plant states closed under the supervisor's unobservable events.
using Estimate = std::vector<StateId>;

/// P_i(G): the subset construction over unobservable closures for one
/// supervisor. State 0 is the initial estimate.
struct Observer {
  std::size_t supervisor = 0;
  std::vector<Estimate> states;
  /// [observer state][event]; only events observable by the supervisor have
  /// entries.
  std::vector<std::vector<std::optional<std::size_t>>> delta;

  std::optional<std::size_t> find(const Estimate& estimate) const;
  std::optional<std::size_t> step(std::size_t state, EventId e) const {
    return delta.at(state).at(index(e));
  }
};

Observer project(const PlantSpec& model, const SupervisionProfile& profile, std::size_t i);

/// Element of G' = G × P_1(G) × … × P_n(G): the plant state and, for each
/// supervisor, the index of its observer state.
struct World {
  StateId plant{};
  std::vector<std::size_t> estimates;

  auto operator<=>(const World&) const = default;
};

/// Reachable part of G'. Worlds are numbered in breadth-first order with
/// events taken by name, so world 0 is the initial world.
struct Composite {
  std::vector<Observer> observers;
  std::vector<World> worlds;
  /// [world][event]
  std::vector<std::vector<std::optional<std::size_t>>> delta;
  /// Reached by some string of L(E).
  std::vector<bool> legal;
  /// Shortlex-least string reaching each world; for legal worlds the least
  /// string of L(E) that reaches it.
  std::vector<EventString> witness;

  std::size_t size() const { return worlds.size(); }
  const Estimate& estimate(std::size_t w, std::size_t i) const {
    return observers.at(i).states.at(worlds.at(w).estimates.at(i));
  }
  std::optional<std::size_t> step(std::size_t w, EventId e) const {
    return delta.at(w).at(index(e));
  }
  /// Follows a string from the initial world.
  std::optional<std::size_t> run(const EventString& s) const;
};

Composite compose(const PlantSpec& model, std::vector<Observer> observers);

/// Convenience: project every supervisor and compose.
Composite compose(const PlantSpec& model, const SupervisionProfile& profile);

}  // namespace kbsc
