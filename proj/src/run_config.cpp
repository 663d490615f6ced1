#include "kbsc/run_config.hpp"

#include "kbsc/oracle.hpp"

namespace kbsc {

CheckOptions validate(const RunConfig& config) {
  CheckOptions out;
  out.condition = config.condition;
  const std::string name(to_string(config.condition));

  if (config.condition == ConditionId::legacy) {
    out.relation = config.relation.value_or(Relation::total);
    out.worlds = config.worlds.value_or(WorldDomain::all);
    out.events = config.events.value_or(EventDomain::controllable);
  } else {
    const bool strong = config.condition == ConditionId::strong_cp || config.condition == ConditionId::strong_da;
    const Relation used = strong ? Relation::total : Relation::partial;
    if (config.relation && *config.relation != used)
      throw Error(name + " is defined over the " + (strong ? "total" : "partial") + " relation");
    if (config.worlds && *config.worlds != WorldDomain::legal)
      throw Error(name + " quantifies over legal worlds only");
    if (config.events && *config.events != EventDomain::controllable)
      throw Error(name + " quantifies over controllable events only");
    out.relation = used;
    out.worlds = WorldDomain::legal;
  }

  if (config.depth && *config.depth > kOracleDepthBound)
    throw Error("depth " + std::to_string(*config.depth) + " exceeds the bound of " +
                std::to_string(kOracleDepthBound));
  return out;
}

}  // namespace kbsc
