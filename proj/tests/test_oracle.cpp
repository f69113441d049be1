#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "sgc/oracle.hpp"

using namespace sgc;

namespace {

struct Case {
    const char* src;
    int max_len;
    std::vector<int> ns;  // finite data sizes to compare at
};

// Every kind of construct the translator supports: identifiers of each base
// type, dereference, assignment, sequencing, branching, loops, local scalars
// and arrays, indexed context arrays, and higher-order application.
const std::vector<Case> kCorpus = {
    {"|- skip : com", 20, {2, 3}},
    {"x : expint |- x : expint", 20, {2, 3}},
    {"x : expbool |- x : expbool", 20, {2, 3}},
    {"v : varint |- v : varint", 20, {2, 3}},
    {"x : varint |- !x : expint", 20, {2, 3}},
    {"x : varint |- x := !x + 1 : com", 20, {2, 3}},
    {"c : com, x : expint |- c; if x = 1 then c else skip : com", 20, {2, 3}},
    {"abort : com |- new_int x := 0 in x := 1; if !x = 1 then abort else skip : com",
     20, {2, 3}},
    {"abort : com |- new_int a[2] := 0 in a[0] := 1; "
     "if !a[1] = 0 then skip else abort : com", 20, {2, 3}},
    {"x : varint[2], i : expint |- x[i] := 1 : com", 20, {2, 3}},
    {"y : expint |- new_int a[2] := 0 in a[y] := y; "
     "if !a[0] = 0 then skip else skip : com", 20, {2, 3}},
    {"x : varint |- while !x > 0 do x := !x - 1 : com", 14, {2, 3}},
    {"abort : com, f : com -> com, x : expint, y : expint |- "
     "f (if x != y then abort else skip) : com", 20, {2}},
    {"abort : com, N : expint |- new_int x := 0 in "
     "(while !x < N do x := !x + 1); if !x > 0 then abort else skip : com", 20, {2, 3}},
    {"f : expint -> expint |- f 1 : expint", 12, {2}},
};

}  // namespace

TEST_CASE("differential: finite-data concretization equals the direct interpreter") {
    for (const auto& c : kCorpus) {
        CAPTURE(c.src);
        Judgement j = parse_judgement(c.src);
        typecheck(j.ctx, j.term);
        TermP t = beta_normalize(j.term);
        for (int n : c.ns) {
            CAPTURE(n);
            Translator tr;
            Strategy s = tr.interpret(j.ctx, t);
            std::set<std::string> sym = gamma(s, n, c.max_len);
            std::set<std::string> conc = interpret_concrete(j.ctx, t, n, c.max_len).words(c.max_len);
            REQUIRE(!conc.empty());  // every term has at least one behaviour
            bool equal = sym == conc;
            CHECK(equal);
            if (!equal) {
                for (const auto& w : sym)
                    if (!conc.count(w)) MESSAGE("only symbolic: " << w);
                for (const auto& w : conc)
                    if (!sym.count(w)) MESSAGE("only concrete: " << w);
            }
        }
    }
}

TEST_CASE("gamma excludes payload values outside the finite data type") {
    // the term always answers 5, which is not a value of int_2
    Judgement j = parse_judgement("|- 5 : expint");
    typecheck(j.ctx, j.term);
    Translator tr;
    Strategy s = tr.interpret(j.ctx, beta_normalize(j.term));
    CHECK(gamma(s, 2, 8).empty());
    CHECK(gamma(s, 6, 8) == std::set<std::string>{"q 5"});
}

TEST_CASE("language_equal agrees with set equality") {
    std::set<std::string> a{"q 0", "q 1"};
    std::set<std::string> b{"q 0", "q 1"};
    CHECK(language_equal(a, b));
    b.erase("q 1");
    CHECK(!language_equal(a, b));
}
