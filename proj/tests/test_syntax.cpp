#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "sgc/ast.hpp"

using namespace sgc;

namespace {

// Independent reference capture-avoiding substitution, written directly from
// the textbook definition (no sharing with the library's implementation).
TermP ref_subst(const TermP& t, const std::string& n, const TermP& v, int& fresh);

void ref_free(const TermP& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == Term::Kind::Ident) {
        out.insert(t->ident);
        return;
    }
    if (t->kind == Term::Kind::Lambda || t->kind == Term::Kind::NewVar) {
        std::set<std::string> inner;
        ref_free(t->t1, inner);
        inner.erase(t->ident);
        out.insert(inner.begin(), inner.end());
        ref_free(t->t2, out);
        ref_free(t->t3, out);
        return;
    }
    ref_free(t->t1, out);
    ref_free(t->t2, out);
    ref_free(t->t3, out);
}

TermP ref_subst(const TermP& t, const std::string& n, const TermP& v, int& fresh) {
    if (!t) return t;
    if (t->kind == Term::Kind::Ident) return t->ident == n ? v : t;
    Term out = *t;
    if (t->kind == Term::Kind::Lambda || t->kind == Term::Kind::NewVar) {
        if (t->ident == n) return t;  // n is shadowed in the body
        std::set<std::string> fv;
        ref_free(v, fv);
        if (fv.count(t->ident)) {
            std::string renamed = t->ident + "#" + std::to_string(++fresh);
            int f2 = fresh;
            out.ident = renamed;
            out.t1 = ref_subst(t->t1, t->ident, term_ident(renamed), f2);
            fresh = f2;
        }
        out.t1 = ref_subst(out.t1, n, v, fresh);
        out.t2 = ref_subst(out.t2, n, v, fresh);
        out.t3 = ref_subst(out.t3, n, v, fresh);
        return std::make_shared<const Term>(std::move(out));
    }
    out.t1 = ref_subst(out.t1, n, v, fresh);
    out.t2 = ref_subst(out.t2, n, v, fresh);
    out.t3 = ref_subst(out.t3, n, v, fresh);
    return std::make_shared<const Term>(std::move(out));
}

bool term_equal(const TermP& a, const TermP& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind || a->ilit != b->ilit || a->blit != b->blit ||
        a->ident != b->ident || a->aop != b->aop || a->rop != b->rop || a->data != b->data ||
        a->is_array != b->is_array || a->arr_len != b->arr_len || a->init != b->init)
        return false;
    return term_equal(a->t1, b->t1) && term_equal(a->t2, b->t2) && term_equal(a->t3, b->t3);
}

const std::vector<std::string> kJudgements = {
    "|- skip : com",
    "x : expint |- x : expint",
    "abort : com, f : com -> com, x : expint, y : expint |- "
    "f (if x != y then abort else skip) : com",
    "abort : com, N : expint |- new_int x := 0 in "
    "(while !x < N do x := !x + 1); if !x > 0 then abort else skip : com",
    "x : varint |- x := !x + 1 : com",
    "b : expbool |- if b && not b then skip else skip : com",
    "c : com |- (\\d : com. d; d) c : com",
    "a : varint[3], i : expint |- a[i + 1] := !a[0] : com",
    "x[?] : varint, y : expint, abort : com |- "
    "new_int i := 0 in while !i < lengthof x do "
    "{ if !x[!i] = y then abort; i := !i + 1 } : com",
    "|- new_int z := 0 in z := !z * 2 - 1 : com",
    "p : expint -> com, q : expint |- p (q % 2) : com",
    "v : varbool |- v := tt : com",
};

}  // namespace

TEST_CASE("parse: single identifier judgement") {
    Judgement j = parse_judgement("x : expint |- x : expint");
    REQUIRE(j.ctx.entries.size() == 1);
    CHECK(j.ctx.entries[0].first == "x");
    CHECK(j.ctx.entries[0].second.display() == "expint");
    CHECK(j.term->kind == Term::Kind::Ident);
    CHECK(j.term->ident == "x");
}

TEST_CASE("parse: application of conditional") {
    Judgement j = parse_judgement(
        "f : com -> com, abort : com, x : expint, y : expint |- "
        "f (if x != y then abort else skip) : com");
    REQUIRE(j.term->kind == Term::Kind::App);
    CHECK(j.term->t1->kind == Term::Kind::Ident);
    CHECK(j.term->t1->ident == "f");
    REQUIRE(j.term->t2->kind == Term::Kind::If);
    CHECK(j.term->t2->t1->kind == Term::Kind::Cmp);
    CHECK(j.term->t2->t1->rop == RelOp::Ne);
    CHECK(j.term->t2->t2->kind == Term::Kind::Abort);
    CHECK(j.term->t2->t3->kind == Term::Kind::Skip);
}

TEST_CASE("parse: new-variable with assignment body") {
    TermP t = parse_term("new_int z := 0 in z := !z + 1");
    REQUIRE(t->kind == Term::Kind::NewVar);
    CHECK(t->data == DType::Int);
    CHECK(t->ident == "z");
    CHECK(t->init == 0);
    REQUIRE(t->t1->kind == Term::Kind::Assign);
    CHECK(t->t1->t1->kind == Term::Kind::Ident);
    REQUIRE(t->t1->t2->kind == Term::Kind::Arith);
    CHECK(t->t1->t2->aop == ArithOp::Add);
    CHECK(t->t1->t2->t1->kind == Term::Kind::Deref);
}

TEST_CASE("parse: else defaults to skip") {
    TermP t = parse_term("if tt then abort");
    REQUIRE(t->kind == Term::Kind::If);
    CHECK(t->t3->kind == Term::Kind::Skip);
}

TEST_CASE("parse: both array declaration forms agree") {
    Judgement a = parse_judgement("x[4] : varint |- x[0] := 1 : com");
    Judgement b = parse_judgement("x : varint[4] |- x[0] := 1 : com");
    CHECK(a.ctx.entries[0].second.display() == b.ctx.entries[0].second.display());
    CHECK(a.ctx.entries[0].second.ret.kind == BaseType::Kind::Arr);
    CHECK(a.ctx.entries[0].second.ret.len == 4);
    Judgement s = parse_judgement("x[?] : varint |- x[0] := 1 : com");
    CHECK(s.ctx.entries[0].second.ret.sym_len);
}

TEST_CASE("parse: diagnostics carry positions") {
    CHECK_THROWS_AS(parse_judgement("|- (skip : com"), ParseError);
    CHECK_THROWS_AS(parse_judgement("x : expint, x : com |- skip : com"), ParseError);
    CHECK_THROWS_AS(parse_judgement("|- new_int a[0] := 0 in skip : com"), ParseError);
    CHECK_THROWS_AS(parse_judgement("|- mkvar : com"), ParseError);
    try {
        parse_judgement("|- skip :\n  come");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("typecheck: table cases") {
    CHECK(typecheck(parse_judgement("x : varint |- !x : expint").ctx,
                    parse_term("!x"))
              .display() == "expint");
    CHECK(typecheck(Context{}, parse_term("skip; skip")).display() == "com");
    Judgement m2 = parse_judgement(
        "abort : com, N : expint |- new_int x := 0 in "
        "(while !x < N do x := !x + 1); if !x > 0 then abort else skip : com");
    CHECK(typecheck(m2.ctx, m2.term).display() == "com");
}

TEST_CASE("typecheck: rejections") {
    CHECK_THROWS_AS(typecheck(Context{}, parse_term("skip + 1")), TypeError);
    CHECK_THROWS_AS(typecheck(Context{}, parse_term("y")), TypeError);
    CHECK_THROWS_AS(typecheck(parse_judgement("x : expint |- skip : com").ctx,
                              parse_term("x 1")),
                    TypeError);
    CHECK_THROWS_AS(typecheck(parse_judgement("x : varint |- skip : com").ctx,
                              parse_term("x[0]")),
                    TypeError);
    CHECK_THROWS_AS(typecheck(parse_judgement("x : varint |- skip : com").ctx,
                              parse_term("lengthof x")),
                    TypeError);
    CHECK_THROWS_AS(typecheck(parse_judgement("x : varbool |- skip : com").ctx,
                              parse_term("x := 1")),
                    TypeError);
}

TEST_CASE("beta: one-step reduction") {
    TermP t = beta_normalize(parse_term("(\\c : com. c; c) skip"));
    CHECK(term_equal(t, parse_term("skip; skip")));
}

TEST_CASE("beta: free application head unchanged") {
    TermP t = parse_term("f skip");
    CHECK(term_equal(beta_normalize(t), t));
}

TEST_CASE("beta: duplication of an effectful argument (reference substitution)") {
    TermP lam = parse_term("\\c : com. c; c");
    TermP arg = parse_term("x := 1");
    TermP got = beta_normalize(term_app(lam, arg));
    int fresh = 0;
    TermP want = ref_subst(lam->t1, lam->ident, arg, fresh);
    CHECK(term_equal(got, want));
    CHECK(pretty(got) == "x := 1; x := 1");
}

TEST_CASE("beta: capture avoidance (reference substitution)") {
    // (\c : com. new_int x := 0 in c) (x := 1) — the bound x must be renamed
    TermP lam = parse_term("\\c : com. new_int x := 0 in c");
    TermP arg = parse_term("x := 1");
    TermP got = beta_normalize(term_app(lam, arg));
    REQUIRE(got->kind == Term::Kind::NewVar);
    CHECK(got->ident != "x");
    std::set<std::string> fv;
    ref_free(got, fv);
    CHECK(fv.count("x"));  // the argument's free x survives
}

TEST_CASE("property: type preservation under beta") {
    for (const auto& src : kJudgements) {
        Judgement j = parse_judgement(src);
        Type before = typecheck(j.ctx, j.term);
        Type after = typecheck(j.ctx, beta_normalize(j.term));
        CHECK(before.display() == after.display());
    }
}

TEST_CASE("property: beta_normalize is idempotent") {
    for (const auto& src : kJudgements) {
        TermP once = beta_normalize(parse_judgement(src).term);
        TermP twice = beta_normalize(once);
        CHECK(term_equal(once, twice));
    }
}

TEST_CASE("property: parse of pretty-print is identity") {
    for (const auto& src : kJudgements) {
        TermP t = parse_judgement(src).term;
        CAPTURE(src);
        CAPTURE(pretty(t));
        CHECK(term_equal(parse_term(pretty(t)), t));
    }
}
