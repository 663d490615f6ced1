#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kbsc/error.hpp"

namespace kbsc {

enum class EventId : std::uint32_t {};
enum class StateId : std::uint32_t {};

constexpr std::size_t index(EventId e) { return static_cast<std::size_t>(e); }
constexpr std::size_t index(StateId q) { return static_cast<std::size_t>(q); }
constexpr EventId event_id(std::size_t k) { return static_cast<EventId>(k); }
constexpr StateId state_id(std::size_t k) { return static_cast<StateId>(k); }

using EventString = std::vector<EventId>;

/// Default upper bound for explicit string enumeration.
inline constexpr std::size_t kDefaultEnumerationBound = 12;

struct Edge {
  StateId target;
  bool legal = false;
};

/// A deterministic plant G together with its legal subautomaton E, stored as
/// legality flags on states and transitions. Immutable once built.
class PlantSpec {
 public:
  std::size_t event_count() const { return event_names_.size(); }
  std::size_t state_count() const { return state_names_.size(); }

  const std::string& name(EventId e) const { return event_names_.at(index(e)); }
  const std::string& name(StateId q) const { return state_names_.at(index(q)); }
  std::optional<EventId> find_event(std::string_view name) const;
  std::optional<StateId> find_state(std::string_view name) const;

  StateId initial() const { return initial_; }
  bool is_legal(StateId q) const { return legal_.at(index(q)); }
  std::optional<Edge> step(StateId q, EventId e) const {
    return delta_[index(q) * event_count() + index(e)];
  }

  /// Events in declaration order.
  std::vector<EventId> events() const;
  /// Events ordered by name; the canonical order for breadth-first walks.
  const std::vector<EventId>& events_by_name() const { return by_name_; }
  std::vector<StateId> states() const;

  /// Renders a string as space separated event names, or "ε" when empty.
  std::string format(const EventString& s) const;

 private:
  friend class PlantBuilder;

  std::vector<std::string> event_names_;
  std::vector<std::string> state_names_;
  std::unordered_map<std::string, EventId> event_lookup_;
  std::unordered_map<std::string, StateId> state_lookup_;
  StateId initial_{};
  std::vector<bool> legal_;
  std::vector<std::optional<Edge>> delta_;
  std::vector<EventId> by_name_;
};

/// Incremental construction of a PlantSpec. Structural problems (duplicates,
/// nondeterminism) are reported as they are added; global invariants are
/// checked by build().
class PlantBuilder {
 public:
  EventId add_event(std::string name, SourceLocation where = {});
  StateId add_state(std::string name, bool legal, SourceLocation where = {});
  void set_initial(StateId q, SourceLocation where = {});
  void add_transition(StateId from, EventId e, StateId to, bool legal, SourceLocation where = {});

  std::optional<EventId> find_event(std::string_view name) const;
  std::optional<StateId> find_state(std::string_view name) const;

  /// Validates and returns the model. Throws ModelError when the initial
  /// state is missing or illegal, when a legal transition touches an illegal
  /// state, or when a state is unreachable.
  PlantSpec build() const;

 private:
  struct PendingTransition {
    StateId from;
    EventId event;
    StateId to;
    bool legal;
    SourceLocation where;
  };

  std::vector<std::string> events_;
  std::vector<std::pair<std::string, bool>> states_;
  std::vector<SourceLocation> state_where_;
  std::unordered_map<std::string, EventId> event_lookup_;
  std::unordered_map<std::string, StateId> state_lookup_;
  std::optional<StateId> initial_;
  std::vector<PendingTransition> transitions_;
};

/// Per-supervisor observable and controllable event sets. Supervisors are
/// indexed from 0 internally.
class SupervisionProfile {
 public:
  SupervisionProfile(std::size_t supervisors, std::size_t events);

  std::size_t supervisors() const { return n_; }
  std::size_t event_count() const { return events_; }

  void set_observable(std::size_t i, EventId e, bool on = true);
  void set_controllable(std::size_t i, EventId e, bool on = true);

  bool observes(std::size_t i, EventId e) const { return observable_.at(i).at(index(e)); }
  bool controls(std::size_t i, EventId e) const { return controllable_.at(i).at(index(e)); }

  /// σ ∈ Σ_c, i.e. some supervisor controls it.
  bool controllable(EventId e) const;
  /// σ ∈ Σ_o.
  bool observable(EventId e) const;
  /// N_σ: supervisors that control σ, ascending.
  std::vector<std::size_t> controllers(EventId e) const;

 private:
  std::size_t n_;
  std::size_t events_;
  std::vector<std::vector<bool>> observable_;
  std::vector<std::vector<bool>> controllable_;
};

/// Explicit deterministic automaton over named events; every state accepts,
/// so the recognized language is the prefix-closed generated language.
struct Dfa {
  std::vector<std::string> alphabet;
  std::vector<std::vector<std::optional<std::size_t>>> next;
  std::size_t initial = 0;

  std::size_t state_count() const { return next.size(); }
};

Dfa to_dfa(const PlantSpec& model, bool legal_only);

/// States reachable from the initial state, optionally along legal
/// transitions only.
std::set<StateId> reachable(const PlantSpec& model, bool legal_only);

/// All strings of L(G) (or L(E)) of length at most k.
std::set<EventString> language_upto(const PlantSpec& model, std::size_t k, bool legal_only,
                                    std::size_t bound = kDefaultEnumerationBound);

struct Equivalence {
  bool equal = true;
  /// Shortest distinguishing string (ties broken by event name) when not equal.
  std::vector<std::string> counterexample;
};

/// Decides L(a) = L(b). Both automata must use the same set of event names.
Equivalence dfa_equivalent(const Dfa& a, const Dfa& b);

/// Strict shortlex order on strings, comparing events by name.
bool shortlex_less(const PlantSpec& model, const EventString& a, const EventString& b);

}  // namespace kbsc
