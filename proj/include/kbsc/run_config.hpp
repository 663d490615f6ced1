#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kbsc/conditions.hpp"

namespace kbsc {

/// Flags shared by the command-line entry points, before validation.
struct RunConfig {
  ConditionId condition = ConditionId::extended;
  std::optional<Relation> relation;
  std::optional<WorldDomain> worlds;
  std::optional<EventDomain> events;
  std::optional<std::size_t> depth;
  std::optional<std::uint32_t> seed;
  bool json = false;
};

/// Throws Error for contradictory flags:
///  - relation, world and event domains are only meaningful for the legacy
///    condition; other conditions accept only the value they use (partial
///    relation, legal worlds, controllable events; strong variants need total)
///  - depth must not exceed kOracleDepthBound
/// Returns the options to hand to check().
CheckOptions validate(const RunConfig& config);

}  // namespace kbsc
