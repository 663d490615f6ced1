#include <doctest.h>

#include "kbsc/automata.hpp"
#include "support.hpp"

using namespace kbsc;
using namespace kbsc::test;

TEST_CASE("builder rejects structural problems") {
  SUBCASE("duplicate event") {
    PlantBuilder b;
    b.add_event("a");
    CHECK_THROWS_AS(b.add_event("a"), ModelError);
  }
  SUBCASE("duplicate state") {
    PlantBuilder b;
    b.add_state("q", true);
    CHECK_THROWS_AS(b.add_state("q", false), ModelError);
  }
  SUBCASE("nondeterminism") {
    PlantBuilder b;
    auto a = b.add_event("a");
    auto q0 = b.add_state("q0", true);
    auto q1 = b.add_state("q1", true);
    b.add_transition(q0, a, q1, true);
    CHECK_THROWS_AS(b.add_transition(q0, a, q0, true), ModelError);
  }
  SUBCASE("two initial states") {
    PlantBuilder b;
    auto q0 = b.add_state("q0", true);
    auto q1 = b.add_state("q1", true);
    b.set_initial(q0);
    CHECK_THROWS_AS(b.set_initial(q1), ModelError);
  }
  SUBCASE("missing initial state") {
    PlantBuilder b;
    b.add_state("q0", true);
    CHECK_THROWS_AS(b.build(), ModelError);
  }
  SUBCASE("illegal initial state") {
    PlantBuilder b;
    b.set_initial(b.add_state("q0", false));
    CHECK_THROWS_AS(b.build(), ModelError);
  }
  SUBCASE("legal transition into an illegal state") {
    PlantBuilder b;
    auto a = b.add_event("a");
    auto q0 = b.add_state("q0", true);
    auto q1 = b.add_state("q1", false);
    b.set_initial(q0);
    b.add_transition(q0, a, q1, true);
    CHECK_THROWS_AS(b.build(), ModelError);
  }
  SUBCASE("unreachable state carries its location") {
    PlantBuilder b;
    b.set_initial(b.add_state("q0", true));
    b.add_state("lost", true, {7, 3});
    try {
      b.build();
      FAIL("expected ModelError");
    } catch (const ModelError& e) {
      CHECK(e.where().line == 7);
      CHECK(e.where().column == 3);
    }
  }
}

TEST_CASE("profile derives controllers and event classes") {
  auto f = fixture("fixture_b");
  auto a = ev(f.model, "a");
  auto g = ev(f.model, "gamma");
  CHECK(f.profile.controllers(g) == std::vector<std::size_t>{0, 1});
  CHECK(f.profile.controllers(a).empty());
  CHECK(f.profile.controllable(g));
  CHECK_FALSE(f.profile.controllable(a));
  CHECK(f.profile.observable(a));
  CHECK_FALSE(f.profile.observable(g));
  CHECK_THROWS_AS(SupervisionProfile(0, 2), ModelError);
}

TEST_CASE("bounded language enumeration includes the empty string") {
  auto f = fixture("fixture_b");
  const auto& m = f.model;
  auto legal = language_upto(m, 6, true);
  CHECK(legal == std::set<EventString>{{}, str(m, "a"), str(m, "a gamma")});
  auto all = language_upto(m, 2, false);
  CHECK(all.size() == 5);  // ε, a, gamma, a gamma, gamma a
  CHECK(all.count(str(m, "gamma a")) == 1);
  CHECK_THROWS_AS(language_upto(m, 13, false), BoundError);
}

TEST_CASE("reachability") {
  auto f = fixture("fixture_b");
  CHECK(reachable(f.model, false).size() == 6);
  CHECK(reachable(f.model, true) == std::set<StateId>{st(f.model, "q0"), st(f.model, "q1"), st(f.model, "q5")});
}

TEST_CASE("language equivalence with shortest counterexample") {
  auto f = fixture("fixture_b");
  auto g = to_dfa(f.model, false);
  auto e = to_dfa(f.model, true);
  CHECK(dfa_equivalent(g, g).equal);
  CHECK(dfa_equivalent(e, e).equal);
  auto r = dfa_equivalent(g, e);
  CHECK_FALSE(r.equal);
  CHECK(r.counterexample == std::vector<std::string>{"gamma"});

  auto c = fixture("fixture_c");
  CHECK_THROWS_AS(dfa_equivalent(g, to_dfa(c.model, false)), AlphabetMismatch);
}

TEST_CASE("counterexample ties break on event names") {
  // Both a and b distinguish; a comes first by name even though b is declared first.
  auto f = parse_model(R"(supervisors 1
event b
event a
state p init legal
state r
trans p b r
trans p a r
)");
  auto r = dfa_equivalent(to_dfa(f.model, false), to_dfa(f.model, true));
  CHECK(r.counterexample == std::vector<std::string>{"a"});
}

TEST_CASE("shortlex order compares length first, then names") {
  auto f = fixture("fixture_c");
  const auto& m = f.model;
  CHECK(shortlex_less(m, {}, str(m, "a")));
  CHECK(shortlex_less(m, str(m, "gamma"), str(m, "a b")));
  CHECK(shortlex_less(m, str(m, "a gamma"), str(m, "b a")));
  CHECK_FALSE(shortlex_less(m, str(m, "b"), str(m, "a")));
  CHECK_FALSE(shortlex_less(m, str(m, "a"), str(m, "a")));
}

TEST_CASE("format renders the empty string as epsilon") {
  auto f = fixture("fixture_b");
  CHECK(f.model.format({}) == "ε");
  CHECK(f.model.format(str(f.model, "a gamma")) == "a gamma");
}
