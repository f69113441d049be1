#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>
#include <random>
#include <set>
#include <vector>

#include "sgc/expr.hpp"

using namespace sgc;

namespace {

// Random expression generator over a fixed set of names.
struct Gen {
    std::mt19937 rng{20240817};
    std::vector<SymName> ints, bools;

    Gen() {
        NamePool pool;
        for (int i = 0; i < 4; ++i) ints.push_back(pool.fresh(DType::Int, "N"));
        for (int i = 0; i < 2; ++i) bools.push_back(pool.fresh(DType::Bool, "B"));
    }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    AExpP aexp(int depth) {
        if (depth == 0 || pick(3) == 0)
            return pick(2) ? aexp_lit(pick(9) - 4) : aexp_name(ints[pick((int)ints.size())]);
        auto op = static_cast<ArithOp>(pick(5));
        return aexp_bin(op, aexp(depth - 1), aexp(depth - 1));
    }
    BExpP bexp(int depth) {
        if (depth == 0) {
            switch (pick(3)) {
                case 0: return bexp_lit(pick(2) == 1);
                case 1: return bexp_name(bools[pick((int)bools.size())]);
                default: return bexp_cmp(static_cast<RelOp>(pick(6)), aexp(1), aexp(1));
            }
        }
        switch (pick(4)) {
            case 0: return bexp_cmp(static_cast<RelOp>(pick(6)), aexp(depth - 1), aexp(depth - 1));
            case 1: return bexp_not(bexp(depth - 1));
            case 2: return bexp_and(bexp(depth - 1), bexp(depth - 1));
            default: return bexp_or(bexp(depth - 1), bexp(depth - 1));
        }
    }
    Evaluation rho() {
        Evaluation r;
        for (const auto& n : ints) r.names[n] = Value::of_int(pick(9) - 4);
        for (const auto& b : bools) r.names[b] = Value::of_bool(pick(2) == 1);
        return r;
    }
};

std::optional<bool> try_eval(const BExpP& b, const Evaluation& rho) {
    try {
        return evaluate(b, rho);
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

size_t size_of(const AExpP& a) {
    if (!a) return 0;
    return 1 + size_of(a->lhs) + size_of(a->rhs) + size_of(a->index);
}
size_t size_of(const BExpP& b) {
    if (!b) return 0;
    return 1 + size_of(b->al) + size_of(b->ar) + size_of(b->bl) + size_of(b->br);
}

}  // namespace

TEST_CASE("name pool: minimal fresh indices, unique across dtypes") {
    NamePool p;
    SymName a = p.fresh(DType::Int);
    SymName b = p.fresh(DType::Bool);
    SymName c = p.fresh(DType::Int);
    CHECK(a.index == 1);
    CHECK(b.index == 2);
    CHECK(c.index == 3);
    CHECK(a != c);
    CHECK(p.used(2));
    CHECK(!p.used(4));
}

TEST_CASE("name identity ignores hints") {
    SymName a{7, DType::Int, "X"};
    SymName b{7, DType::Int, "Y"};
    CHECK(a == b);
    CHECK(!(a < b));
    CHECK(!(b < a));
}

TEST_CASE("render: literals, precedence, names") {
    NamePool p;
    SymName x = p.fresh(DType::Int, "X");
    SymName y = p.fresh(DType::Int, "Y");
    AExpP e = aexp_bin(ArithOp::Mul, aexp_bin(ArithOp::Add, aexp_name(x), aexp_lit(1)),
                       aexp_name(y));
    CHECK(render(e) == "(X+1)*Y");
    CHECK(render(bexp_cmp(RelOp::Ne, aexp_name(x), aexp_name(y))) == "X!=Y");
    CHECK(render(bexp_not(bexp_name(p.fresh(DType::Bool, "b")))) == "!b");
}

TEST_CASE("evaluate: division semantics") {
    Evaluation rho;
    CHECK(evaluate(aexp_bin(ArithOp::Div, aexp_lit(7), aexp_lit(2)), rho) == 3);
    CHECK(evaluate(aexp_bin(ArithOp::Mod, aexp_lit(7), aexp_lit(2)), rho) == 1);
    CHECK_THROWS_AS(evaluate(aexp_bin(ArithOp::Div, aexp_lit(1), aexp_lit(0)), rho), EvalError);
    CHECK_THROWS_AS(evaluate(aexp_name(SymName{5, DType::Int, ""}), rho), EvalError);
}

TEST_CASE("fold: literal arithmetic and boolean laws") {
    NamePool p;
    SymName x = p.fresh(DType::Int, "X");
    CHECK(as_literal(fold(aexp_bin(ArithOp::Add, aexp_lit(2), aexp_lit(3)))) == 5);
    // identity elements
    CHECK(render(fold(aexp_bin(ArithOp::Add, aexp_name(x), aexp_lit(0)))) == "X");
    CHECK(render(fold(aexp_bin(ArithOp::Mul, aexp_lit(1), aexp_name(x)))) == "X");
    // tt && b = b; ff || b = b
    BExpP c = bexp_cmp(RelOp::Lt, aexp_name(x), aexp_lit(3));
    CHECK(render(fold(bexp_and(bexp_lit(true), c))) == "X<3");
    CHECK(render(fold(bexp_or(bexp_lit(false), c))) == "X<3");
    // negation pushes through comparisons
    CHECK(render(fold(bexp_not(c))) == "X>=3");
    CHECK(render(fold(bexp_not(bexp_not(c)))) == "X<3");
    // division by a literal zero is never folded away
    AExpP bad = aexp_bin(ArithOp::Div, aexp_lit(1), aexp_lit(0));
    CHECK(fold(bad)->kind == AExp::Kind::Bin);
}

TEST_CASE("property: fold preserves evaluation and never grows (500 random)") {
    Gen g;
    for (int it = 0; it < 500; ++it) {
        BExpP b = g.bexp(4);
        BExpP f = fold(b);
        CHECK(size_of(f) <= size_of(b));
        for (int k = 0; k < 5; ++k) {
            Evaluation rho = g.rho();
            auto vb = try_eval(b, rho), vf = try_eval(f, rho);
            // folding may only erase undefinedness (an undefined guard is
            // never satisfied), never flip or introduce it
            CHECK(vb.value_or(false) == vf.value_or(false));
            if (vb) CHECK(vf == vb);
        }
    }
}

TEST_CASE("property: rewrite substitutes exactly the mapped names") {
    NamePool p;
    SymName x = p.fresh(DType::Int, "X");
    SymName y = p.fresh(DType::Int, "Y");
    std::map<SymName, Exp> sub{{x, exp_of(aexp_bin(ArithOp::Add, aexp_name(y), aexp_lit(1)))}};
    BExpP b = bexp_cmp(RelOp::Eq, aexp_name(x), aexp_name(y));
    CHECK(render(rewrite(b, sub)) == "Y+1=Y");
    // names absent from the map are untouched
    std::set<SymName> names;
    collect_names(rewrite(b, sub), names);
    CHECK(names.count(y));
    CHECK(!names.count(x));
}

TEST_CASE("collect_names_ordered: first-appearance order, includes fun symbols") {
    NamePool p;
    SymName x = p.fresh(DType::Int, "X");
    SymName y = p.fresh(DType::Int, "Y");
    SymName f = p.fresh(DType::Int, "A");
    AExpP e = aexp_bin(ArithOp::Add, aexp_name(y),
                       aexp_funapp(FunSym{f}, aexp_name(x), 0));
    std::vector<SymName> order;
    std::set<SymName> seen;
    collect_names_ordered(e, order, seen);
    REQUIRE(order.size() == 3);
    CHECK(order[0] == y);
    CHECK(order[1] == f);
    CHECK(order[2] == x);
}

TEST_CASE("rename_hints: display changes, identity stays") {
    NamePool p;
    SymName x = p.fresh(DType::Int, "X");
    BExpP b = bexp_cmp(RelOp::Gt, aexp_name(x), aexp_lit(0));
    BExpP r = rename_hints(b, {{x.index, "N"}});
    CHECK(render(r) == "N>0");
    CHECK(exp_equal(b, r));  // hints are not part of identity
}

TEST_CASE("exp_equal: structural, hint-insensitive") {
    NamePool p;
    SymName x = p.fresh(DType::Int, "X");
    AExpP a = aexp_bin(ArithOp::Sub, aexp_name(x), aexp_lit(2));
    AExpP b = aexp_bin(ArithOp::Sub, aexp_name(SymName{x.index, DType::Int, "Z"}), aexp_lit(2));
    CHECK(exp_equal(a, b));
    CHECK(!exp_equal(a, aexp_bin(ArithOp::Sub, aexp_lit(2), aexp_name(x))));
}
