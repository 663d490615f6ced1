#include <doctest.h>

#include "kbsc/oracle.hpp"
#include "kbsc/synthesis.hpp"
#include "support.hpp"

using namespace kbsc;
using namespace kbsc::test;
using CD = ControlDecision;

TEST_CASE("policy branches") {
  auto p = [](bool ke, bool kd, bool ec, bool dc) { return policy_from({ke, kd, ec, dc}); };
  CHECK(p(true, false, false, false).decision == CD::on);
  CHECK(p(true, false, true, true).why == PolicyCase::knows_enable);
  CHECK(p(false, true, true, false).decision == CD::off);
  CHECK(p(false, false, false, true).decision == CD::won);
  CHECK(p(false, false, true, false).decision == CD::woff);
  CHECK(p(false, false, true, true).why == PolicyCase::others_cover);
  CHECK(p(false, false, true, true).decision == CD::abstain);
  CHECK(p(true, true, false, false).why == PolicyCase::knows_both);
  CHECK(p(false, false, false, false).why == PolicyCase::no_knowledge);
  for (auto c : {PolicyCase::knows_enable, PolicyCase::knows_disable, PolicyCase::bets_enable,
                 PolicyCase::bets_disable, PolicyCase::others_cover, PolicyCase::knows_both,
                 PolicyCase::no_knowledge, PolicyCase::no_legal_world})
    CHECK(parse_policy_case(to_string(c)) == c);
}

TEST_CASE("kp on the fixtures") {
  auto b = fixture("fixture_b");
  auto bf = build_frame(b.model, b.profile);
  auto g = ev(b.model, "gamma");
  CHECK(kp(bf, world(bf, ""), g, 0) == CD::off);
  CHECK(kp(bf, world(bf, "a"), g, 0) == CD::on);
  CHECK(kp(bf, world(bf, ""), g, 1) == CD::abstain);

  auto c = fixture("fixture_c");
  auto cf = build_frame(c.model, c.profile);
  auto gc = ev(c.model, "gamma");
  CHECK(kp(cf, world(cf, ""), gc, 0) == CD::woff);
  CHECK(kp(cf, world(cf, ""), gc, 1) == CD::woff);
  CHECK(kp(cf, world(cf, "a"), gc, 0) == CD::on);
  CHECK(kp(cf, world(cf, "b"), gc, 0) == CD::woff);

  auto m = fixture("fixture_c_mirror");
  auto mf = build_frame(m.model, m.profile);
  CHECK(kp(mf, world(mf, ""), ev(m.model, "gamma"), 0) == CD::won);
  CHECK(kp(mf, world(mf, "a"), ev(m.model, "gamma"), 0) == CD::off);
}

TEST_CASE("projected policies") {
  auto c = fixture("fixture_c");
  auto cf = build_frame(c.model, c.profile);
  KnowledgeBase kb(cf);
  auto p = project_policy(kb, 0, ev(c.model, "gamma"));
  REQUIRE(p.size() == 2);
  CHECK(p[0].decision == CD::woff);
  CHECK(p[1].decision == CD::on);
  CHECK(p[0].why == PolicyCase::bets_disable);

  auto b = fixture("fixture_b");
  auto bf = build_frame(b.model, b.profile);
  KnowledgeBase kbb(bf);
  auto p2 = project_policy(kbb, 1, ev(b.model, "gamma"));
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].decision == CD::abstain);
  CHECK(p2[0].why == PolicyCase::others_cover);
}

TEST_CASE("estimates reached only illegally abstain") {
  auto f = parse_model(R"(supervisors 1
event b obs=1
event g ctrl=1
state p init legal
state x
state y
trans p g x
trans x b y
trans y g y
)");
  auto frame = build_frame(f.model, f.profile);
  KnowledgeBase kb(frame);
  auto policy = project_policy(kb, 0, ev(f.model, "g"));
  bool seen = false;
  for (const auto& e : policy)
    if (e.why == PolicyCase::no_legal_world) {
      seen = true;
      CHECK(e.decision == CD::abstain);
    }
  CHECK(seen);
}

TEST_CASE("synthesized supervisors solve the fixtures") {
  for (auto name : {"fixture_b", "fixture_c", "fixture_c_mirror"}) {
    CAPTURE(name);
    auto f = fixture(name);
    auto r = synthesize(f.model, f.profile);
    CHECK(verify_solution(f.model, f.profile, r).equal);
    CHECK(oracle_solves(f.model, f.profile, r, 8).passed);
  }
}

TEST_CASE("fixture B tables") {
  auto f = fixture("fixture_b");
  auto r = synthesize(f.model, f.profile);
  auto g = ev(f.model, "gamma");
  REQUIRE(r.supervisors.size() == 2);
  CHECK(r.supervisors[0].decision(0, g) == CD::off);
  CHECK(r.supervisors[0].decision(1, g) == CD::on);
  CHECK(r.supervisors[1].decision(0, g) == CD::abstain);
  CHECK(r.defaults.at(g) == FusedDecision::enable);
  CHECK(r.supervisors[0].provenance[0].at(g) == PolicyCase::knows_disable);
  CHECK_THROWS_AS(r.supervisors[0].decision(0, ev(f.model, "a")), Error);

  CHECK_FALSE(allowed(r, f.profile, {0, 0}, g));
  CHECK(allowed(r, f.profile, {1, 0}, g));
  CHECK(allowed(r, f.profile, {0, 0}, ev(f.model, "a")));
  CHECK(decision_bag(r, f.profile, {1, 0}, g) == DecisionBag{CD::on, CD::abstain});
}

TEST_CASE("a corrupted table is caught by verification") {
  auto f = fixture("fixture_b");
  auto r = synthesize(f.model, f.profile);
  auto g = ev(f.model, "gamma");
  r.supervisors[0].table[0][g] = CD::on;
  auto eq = verify_solution(f.model, f.profile, r);
  CHECK_FALSE(eq.equal);
  CHECK(eq.counterexample == std::vector<std::string>{"gamma"});
  auto o = oracle_solves(f.model, f.profile, r, 2);
  CHECK_FALSE(o.passed);
  CHECK(o.string.empty());
  CHECK(o.violation == Violation::illegal_enabled);

  r.supervisors[1].table[0][g] = CD::off;
  auto conflict = oracle_solves(f.model, f.profile, r, 2);
  CHECK(conflict.violation == Violation::fusion_error);
}

TEST_CASE("synthesis failures carry their verdict") {
  auto d = fixture("diamond");
  try {
    synthesize(d.model, d.profile);
    FAIL("expected NotInferenceObservable");
  } catch (const NotInferenceObservable& e) {
    CHECK_FALSE(e.verdict().holds);
    CHECK(e.verdict().counterexample);
  }

  auto nc = parse_model(R"(supervisors 1
event u
state p init legal
state x
trans p u x
)");
  CHECK_THROWS_AS(synthesize(nc.model, nc.profile), NotControllable);
}

TEST_CASE("with nothing controllable the closed loop is the plant") {
  auto f = parse_model(R"(supervisors 2
event a obs=1
event b obs=2
state p init legal
state q legal
trans p a q legal
trans q b p legal
trans q a q legal
)");
  auto r = synthesize(f.model, f.profile);
  CHECK(r.defaults.empty());
  CHECK(dfa_equivalent(closed_loop(f.model, f.profile, r), to_dfa(f.model, false)).equal);
  CHECK(verify_solution(f.model, f.profile, r).equal);
}

TEST_CASE("closed loop of fixture C is E") {
  auto f = fixture("fixture_c");
  auto r = synthesize(f.model, f.profile);
  auto loop = closed_loop(f.model, f.profile, r);
  CHECK(dfa_equivalent(loop, to_dfa(f.model, true)).equal);
  CHECK_FALSE(dfa_equivalent(loop, to_dfa(f.model, false)).equal);
}
