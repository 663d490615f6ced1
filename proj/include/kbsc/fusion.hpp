#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbsc/error.hpp"

namespace kbsc {

/// Per-supervisor vote for one event.
enum class ControlDecision { on, off, won, woff, abstain };

/// Final, fused decision for one event. No operations are defined over it.
enum class FusedDecision { enable, disable };

std::string_view to_string(ControlDecision d);
std::string_view to_string(FusedDecision d);
std::optional<ControlDecision> parse_control_decision(std::string_view s);
std::optional<FusedDecision> parse_fused_decision(std::string_view s);

/// Decisions issued for one event, one per controlling supervisor.
using DecisionBag = std::vector<ControlDecision>;

/// Both `on` and `off` were issued for the same event.
class ControlConflict : public Error {
 public:
  ControlConflict() : Error("control conflict: both on and off issued") {}
};

/// The rule has no row for the given decisions.
class UndefinedFusion : public Error {
 public:
  using Error::Error;
};

/// Five-valued fusion with a per-event default, applied to the decisions of
/// the supervisors controlling the event (one entry per controller).
///  - on without off: enable; off without on: disable
///  - otherwise won without woff: enable; woff without won: disable
///  - nothing but abstain: the default
/// Throws ControlConflict for {on, off} and UndefinedFusion for {won, woff}
/// with neither on nor off.
FusedDecision fuse(std::span<const ControlDecision> bag, FusedDecision dft);

/// Four-valued, two-supervisor table where `off` beats `on`, `on` beats
/// `woff`, `woff` beats `abstain` and two abstentions enable. Unordered in
/// its arguments; any pair involving `won` is UndefinedFusion.
FusedDecision fuse_four_valued(ControlDecision a, ControlDecision b);

}  // namespace kbsc
