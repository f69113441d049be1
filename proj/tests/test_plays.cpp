#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "sgc/plays.hpp"
#include "sgc/semantics.hpp"

using namespace sgc;

namespace {

Strategy model_of(const std::string& judgement) {
    Judgement j = parse_judgement(judgement);
    typecheck(j.ctx, j.term);
    Translator tr;
    return tr.interpret(j.ctx, beta_normalize(j.term));
}

const char* kLoop =
    "abort : com, N : expint |- new_int x := 0 in "
    "(while !x < N do x := !x + 1); if !x > 0 then abort else skip : com";

const char* kBranch =
    "f : com -> com, abort : com, x : expint, y : expint |- "
    "f (if x != y then abort else skip) : com";

SymAutomaton chain(std::vector<GuardedLetter> ls) {
    SymAutomaton a;
    a.nstates = static_cast<int>(ls.size()) + 1;
    a.finals = {static_cast<int>(ls.size())};
    for (size_t i = 0; i < ls.size(); ++i)
        a.trans.push_back({static_cast<int>(i), ls[i].guard, ls[i].letter,
                           static_cast<int>(i) + 1});
    return a;
}

}  // namespace

TEST_CASE("enumerate_plays: shortest first, ties by rendered word") {
    for (const char* src : {kLoop, kBranch}) {
        CAPTURE(src);
        Strategy s = model_of(src);
        auto plays = enumerate_plays(s.aut, 10);
        REQUIRE(!plays.empty());
        for (size_t i = 1; i < plays.size(); ++i) {
            CHECK(plays[i - 1].letters.size() <= plays[i].letters.size());
            if (plays[i - 1].letters.size() == plays[i].letters.size())
                CHECK(plays[i - 1].word_display() <= plays[i].word_display());
        }
        for (const auto& p : plays) {
            CHECK(p.letters.size() <= 10);
            REQUIRE(!p.path.empty());
            CHECK(p.path.front() == s.aut.initial);
            // the aborting flag reflects abort-tagged moves
            bool tagged = false;
            for (const auto& m : p.letters)
                for (const auto& t : m.tags)
                    if (t.kind == TagAtom::Kind::Ident && t.ident == "abort") tagged = true;
            CHECK(p.aborting == tagged);
        }
    }
}

TEST_CASE("loop example: conditions of the first aborting plays") {
    Strategy s = model_of(kLoop);
    std::vector<Play> aborting;
    for (const auto& p : enumerate_plays(s.aut, 10))
        if (p.complete && p.aborting) aborting.push_back(p);
    REQUIRE(aborting.size() >= 3);

    // zero loop iterations: every input occurs once and keeps its bare name
    CHECK(aborting[0].letters.size() == 6);
    CHECK(aborting[0].word_display() == "run q^{N} N^{N} run^{abort} done^{abort} done");
    CHECK(aborting[0].condition_display() == "X=0 && X>=N && X>0");

    // one iteration: repeated inputs get indexed instance names
    CHECK(aborting[1].letters.size() == 8);
    CHECK(aborting[1].condition_display() ==
          "X1=0 && X1<N1 && X2=X1+1 && X2>=N2 && X2>0");
    std::vector<std::string> ins;
    for (const auto& n : aborting[1].inputs) ins.push_back(n.display());
    CHECK(ins == std::vector<std::string>{"X1", "N1", "X2", "N2"});

    // two iterations
    CHECK(aborting[2].condition_display() ==
          "X1=0 && X1<N1 && X2=X1+1 && X2<N2 && X3=X2+1 && X3>=N3 && X3>0");
}

TEST_CASE("concretize: instantiating the one-iteration play") {
    Strategy s = model_of(kLoop);
    std::vector<Play> aborting;
    for (const auto& p : enumerate_plays(s.aut, 8))
        if (p.complete && p.aborting) aborting.push_back(p);
    REQUIRE(aborting.size() >= 2);
    const Play& p = aborting[1];
    Evaluation rho;
    for (const auto& n : p.inputs) {
        if (n.display() == "X1" || n.display() == "X2")
            rho.names[n] = Value::of_int(n.display() == "X1" ? 0 : 1);
        else
            rho.names[n] = Value::of_int(1);  // N1 = N2 = 1
    }
    // check the evaluation satisfies the play condition first
    for (const auto& c : p.condition) CHECK(evaluate(c, rho));
    CHECK(concretize(p, rho) ==
          "run q^{N} 1^{N} q^{N} 1^{N} run^{abort} done^{abort} done");
}

TEST_CASE("play conditions do not repeat identical conjuncts") {
    NamePool pool;
    SymName x = pool.fresh(DType::Int, "X");
    BExpP pos = bexp_cmp(RelOp::Gt, aexp_name(x), aexp_lit(0));
    SymAutomaton a = chain({gl(mk_letter_binder(MoveCtor::Val, x)),
                            gl(Guard::of(pos), mk_letter(MoveCtor::Run)),
                            gl(Guard::of(pos), mk_letter(MoveCtor::Done))});
    auto plays = enumerate_plays(a, 3);
    REQUIRE(!plays.empty());
    const Play& p = plays.back();
    REQUIRE(p.letters.size() == 3);
    CHECK(p.condition.size() == 1);
    CHECK(p.condition_display() == "X>0");
}
