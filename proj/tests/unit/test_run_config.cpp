#include <doctest.h>

#include "kbsc/run_config.hpp"

using namespace kbsc;

TEST_CASE("legacy defaults and free flags") {
  RunConfig c;
  c.condition = ConditionId::legacy;
  auto o = validate(c);
  CHECK(o.relation == Relation::total);
  CHECK(o.worlds == WorldDomain::all);
  CHECK(o.events == EventDomain::controllable);

  c.relation = Relation::partial;
  c.worlds = WorldDomain::legal;
  c.events = EventDomain::all;
  o = validate(c);
  CHECK(o.relation == Relation::partial);
  CHECK(o.worlds == WorldDomain::legal);
  CHECK(o.events == EventDomain::all);
}

TEST_CASE("other conditions reject contradictory flags") {
  RunConfig c;
  c.condition = ConditionId::corrected;
  CHECK(validate(c).relation == Relation::partial);
  c.relation = Relation::partial;
  CHECK_NOTHROW(validate(c));
  c.relation = Relation::total;
  CHECK_THROWS_AS(validate(c), Error);

  RunConfig s;
  s.condition = ConditionId::strong_cp;
  CHECK(validate(s).relation == Relation::total);
  s.relation = Relation::partial;
  CHECK_THROWS_AS(validate(s), Error);

  RunConfig w;
  w.condition = ConditionId::cp;
  w.worlds = WorldDomain::all;
  CHECK_THROWS_AS(validate(w), Error);

  RunConfig e;
  e.condition = ConditionId::extended;
  e.events = EventDomain::all;
  CHECK_THROWS_AS(validate(e), Error);
}

TEST_CASE("depth bound") {
  RunConfig c;
  c.depth = 10;
  CHECK_NOTHROW(validate(c));
  c.depth = 11;
  CHECK_THROWS_AS(validate(c), Error);
}
