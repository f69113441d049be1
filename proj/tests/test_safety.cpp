#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "sgc/safety.hpp"

using namespace sgc;

namespace {

Strategy model_of(const std::string& judgement) {
    Judgement j = parse_judgement(judgement);
    typecheck(j.ctx, j.term);
    Translator tr;
    return tr.interpret(j.ctx, beta_normalize(j.term));
}

const char* kBranch =
    "f : com -> com, abort : com, x : expint, y : expint |- "
    "f (if x != y then abort else skip) : com";

const char* kLoop =
    "abort : com, N : expint |- new_int x := 0 in "
    "(while !x < N do x := !x + 1); if !x > 0 then abort else skip : com";

}  // namespace

TEST_CASE("branch example: unsafe with a 12-move witness") {
    Strategy s = model_of(kBranch);
    Verdict v = check_safety(s, SolverOptions{}, 64);
    REQUIRE(v.kind == Verdict::Kind::Unsafe);
    CHECK(v.play.letters.size() == 12);
    CHECK(v.play.aborting);
    CHECK(v.play.complete);
    CHECK(v.play.condition_display() == "X!=Y");
    // the model really separates the two inputs
    Constraint c = constraint_of(v.play);
    CHECK(validate_model(c, v.model));
    CHECK(!v.concrete.empty());
    CHECK(v.concrete.find("run^{abort}") != std::string::npos);
}

TEST_CASE("loop example: shortest play infeasible, second feasible") {
    Strategy s = model_of(kLoop);
    auto plays = unsafe_plays(s, 10);
    REQUIRE(plays.size() >= 2);
    for (const auto& p : plays) {
        CHECK(p.aborting);
        CHECK(p.complete);
    }
    for (size_t i = 1; i < plays.size(); ++i)
        CHECK(plays[i - 1].letters.size() <= plays[i].letters.size());

    CHECK(check_sat_builtin(constraint_of(plays[0])).kind == SatResult::Kind::Unsat);
    SatResult second = check_sat_builtin(constraint_of(plays[1]));
    REQUIRE(second.kind == SatResult::Kind::Sat);

    Verdict v = check_safety(s, SolverOptions{}, 64);
    REQUIRE(v.kind == Verdict::Kind::Unsafe);
    CHECK(v.play.letters.size() == 8);  // exactly one loop iteration
    CHECK(v.concrete == "run q^{N} 1^{N} q^{N} 0^{N} run^{abort} done^{abort} done");
}

TEST_CASE("safe terms stay safe at every larger depth") {
    Strategy s = model_of(
        "abort : com |- new_int z := 1 in if !z = 0 then abort else skip : com");
    for (int d : {4, 8, 16, 32, 64}) {
        Verdict v = check_safety(s, SolverOptions{}, d);
        CHECK(v.kind == Verdict::Kind::Safe);
        CHECK(v.explored_depth == d);
    }
    CHECK(check_safety(model_of("|- skip : com"), SolverOptions{}, 8).kind ==
          Verdict::Kind::Safe);
}

TEST_CASE("inconclusive when the box is too small, unsafe when it fits") {
    Strategy s = model_of(
        "abort : com, x : expint |- if x > 100 then abort else skip : com");
    SolverOptions small;
    small.bound = 8;
    Verdict v = check_safety(s, small, 16);
    CHECK(v.kind == Verdict::Kind::Inconclusive);
    CHECK(v.unknowns >= 1);

    SolverOptions big;
    big.bound = 128;
    Verdict w = check_safety(s, big, 16);
    REQUIRE(w.kind == Verdict::Kind::Unsafe);
    CHECK(w.model.names.begin()->second.i > 100);
}

TEST_CASE("reports survive a render/parse round trip") {
    const std::vector<const char*> sources = {
        kBranch, kLoop, "|- skip : com",
        "abort : com, x : expint |- if x > 100 then abort else skip : com"};
    SolverOptions small;
    small.bound = 8;
    for (const char* src : sources) {
        CAPTURE(src);
        Verdict v = check_safety(model_of(src), small, 16);
        Report r = report_of(v);
        CHECK(parse_report(render_report(r)) == r);
    }
}

TEST_CASE("malformed reports are rejected") {
    CHECK_THROWS_AS(parse_report(""), std::runtime_error);
    CHECK_THROWS_AS(parse_report("verdict maybe\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_report("verdict safe\nwibble 3\n"), std::runtime_error);
}
