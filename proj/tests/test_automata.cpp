#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sgc/automaton.hpp"
#include "sgc/oracle.hpp"
#include "sgc/semantics.hpp"

using namespace sgc;

namespace {

// ---------------------------------------------------------------------------
// Reference concrete semantics, written directly from the textbook definition
// of an NFA with epsilon transitions: fix an evaluation rho of the symbolic
// names, keep exactly the transitions whose guards hold under rho, and
// enumerate accepted words with letters rendered as (constructor, value).
// Shares nothing with the library's own enumeration machinery.
// ---------------------------------------------------------------------------

bool holds(const Guard& g, const Evaluation& rho) {
    for (const auto& at : g.atoms) {
        REQUIRE(at.kind == GuardAtom::Kind::Plain);  // corpus uses plain guards
        try {
            if (!evaluate(at.plain, rho)) return false;
        } catch (const EvalError&) {
            return false;  // an undefined guard is never satisfied
        }
    }
    return true;
}

std::string crender(const SymLetter& m, const Evaluation& rho) {
    std::string s = ctor_name(m.ctor);
    if (!m.tags.empty()) {
        s += "^";
        for (const auto& t : m.tags) s += "," + t.display();
    }
    if (m.payload) {
        REQUIRE(!m.payload->binder);  // corpus payloads are expressions
        s += "(" + evaluate(m.payload->expr, rho).display() + ")";
    }
    return s;
}

/// Accepted concrete words of at most max_len letters, or nullopt if the
/// language exceeds the exploration budget (the caller skips such samples).
std::optional<std::set<std::string>> ref_language(const SymAutomaton& a, const Evaluation& rho,
                                                  int max_len, size_t budget = 20000) {
    auto closure = [&](std::set<int> s) {
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& t : a.trans)
                if (!t.letter && s.count(t.src) && !s.count(t.dst) && holds(t.guard, rho)) {
                    s.insert(t.dst);
                    grew = true;
                }
        }
        return s;
    };
    auto accepting = [&](const std::set<int>& s) {
        for (int f : a.finals)
            if (s.count(f)) return true;
        return false;
    };
    std::set<std::string> out;
    std::set<int> start = closure({a.initial});
    bool empty_ok = accepting(start);
    for (const auto& g : a.accept_empty)
        if (holds(g, rho)) empty_ok = true;
    if (empty_ok) out.insert("");
    std::map<std::string, std::set<int>> frontier{{"", start}};
    for (int len = 1; len <= max_len && !frontier.empty(); ++len) {
        std::map<std::string, std::set<int>> next;
        for (const auto& [w, ss] : frontier)
            for (const auto& t : a.trans) {
                if (!t.letter || !ss.count(t.src) || !holds(t.guard, rho)) continue;
                std::string w2 = w.empty() ? crender(*t.letter, rho)
                                           : w + " " + crender(*t.letter, rho);
                next[w2].insert(t.dst);
                if (next.size() > budget) return std::nullopt;
            }
        for (auto& [w, ss] : next) {
            ss = closure(ss);
            if (accepting(ss)) out.insert(w);
        }
        if (out.size() > budget) return std::nullopt;
        frontier = std::move(next);
    }
    return out;
}

// Random automata over two integer names and one boolean name; guards are
// plain, payloads are total arithmetic expressions.
struct RGen {
    std::mt19937 rng{20250823};
    NamePool pool;
    std::vector<SymName> ints;
    SymName flag;

    RGen() {
        for (int i = 0; i < 2; ++i) ints.push_back(pool.fresh(DType::Int, "N"));
        flag = pool.fresh(DType::Bool, "B");
    }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    AExpP aexp() {
        switch (pick(3)) {
            case 0: return aexp_lit(pick(5) - 2);
            case 1: return aexp_name(ints[pick(2)]);
            default:
                return aexp_bin(static_cast<ArithOp>(pick(3)),  // Add/Sub/Mul only
                                aexp_lit(pick(3)), aexp_name(ints[pick(2)]));
        }
    }
    Guard guard() {
        int k = pick(4);
        if (k == 0) return Guard::tt();
        if (k == 1) return Guard::of(bexp_name(flag));
        return Guard::of(bexp_cmp(static_cast<RelOp>(pick(6)), aexp(), aexp()));
    }
    SymLetter letter() {
        switch (pick(4)) {
            case 0: return mk_letter(MoveCtor::Q);
            case 1: return mk_letter(MoveCtor::Run);
            case 2: return mk_letter(MoveCtor::Done);
            default: return mk_letter_exp(MoveCtor::Val, exp_of(aexp()));
        }
    }
    SymAutomaton automaton() {
        SymAutomaton a;
        a.nstates = 3 + pick(3);
        int ntr = 4 + pick(5);
        for (int i = 0; i < ntr; ++i) {
            Transition t;
            t.src = pick(a.nstates);
            t.dst = pick(a.nstates);
            t.guard = guard();
            if (pick(4) != 0) t.letter = letter();  // 1 in 4 is an epsilon
            a.trans.push_back(t);
        }
        int nf = 1 + pick(2);
        for (int i = 0; i < nf; ++i) a.finals.insert(pick(a.nstates));
        return a;
    }
    Evaluation rho() {
        Evaluation r;
        for (const auto& n : ints) r.names[n] = Value::of_int(pick(7) - 3);
        r.names[flag] = Value::of_bool(pick(2) == 1);
        return r;
    }
};

SymAutomaton chain(std::vector<GuardedLetter> ls) {
    SymAutomaton a;
    a.nstates = static_cast<int>(ls.size()) + 1;
    a.finals = {static_cast<int>(ls.size())};
    for (size_t i = 0; i < ls.size(); ++i)
        a.trans.push_back({static_cast<int>(i), ls[i].guard, ls[i].letter,
                           static_cast<int>(i) + 1});
    return a;
}

std::set<std::string> lang(const SymAutomaton& a, int n, int max_len) {
    Strategy s;
    s.aut = a;
    return gamma(s, n, max_len);
}

bool has_bind_atom(const SymAutomaton& a) {
    for (const auto& t : a.trans)
        for (const auto& at : t.guard.atoms)
            if (at.kind == GuardAtom::Kind::Bind) return true;
    return false;
}

}  // namespace

TEST_CASE("regular constructions: textbook languages") {
    SymAutomaton q = aut_letter(gl(mk_letter(MoveCtor::Q)));
    SymAutomaton r = aut_letter(gl(mk_letter(MoveCtor::Run)));
    CHECK(raw_language(aut_empty(), 3).empty());
    CHECK(raw_language(aut_epsilon(), 3) == std::set<std::string>{""});
    CHECK(raw_language(q, 3) == std::set<std::string>{"q"});
    CHECK(raw_language(concat(q, r), 3) == std::set<std::string>{"q run"});
    CHECK(raw_language(alt(q, r), 3) == std::set<std::string>{"q", "run"});
    CHECK(raw_language(star(q), 3) == std::set<std::string>{"", "q", "q q", "q q q"});
    CHECK(raw_language(intersect(alt(q, r), q), 3) == std::set<std::string>{"q"});
    CHECK(raw_language(shuffle(q, r), 2) == std::set<std::string>{"q run", "run q"});
}

TEST_CASE("property: transformations preserve the concrete language (random automata)") {
    RGen g;
    using Op = SymAutomaton (*)(const SymAutomaton&);
    const std::vector<std::pair<std::string, Op>> ops = {
        {"eliminate_epsilon", &eliminate_epsilon}, {"prune_unreachable", &prune_unreachable},
        {"trim", &trim},                           {"simplify", &simplify},
        {"collapse_aliases", &collapse_aliases},   {"normalize", &normalize},
        {"quotient", &quotient},
    };
    int tested = 0;
    for (int it = 0; it < 150; ++it) {
        SymAutomaton a = g.automaton();
        std::vector<Evaluation> rhos = {g.rho(), g.rho(), g.rho()};
        std::vector<std::optional<std::set<std::string>>> want;
        bool skip = false;
        for (const auto& rho : rhos) {
            want.push_back(ref_language(a, rho, 12));
            if (!want.back()) skip = true;
        }
        if (skip) continue;
        ++tested;
        for (const auto& [nm, op] : ops) {
            SymAutomaton b = op(a);
            for (size_t k = 0; k < rhos.size(); ++k) {
                auto got = ref_language(b, rhos[k], 12);
                REQUIRE(got.has_value());
                CAPTURE(nm);
                CAPTURE(it);
                CHECK(*got == *want[k]);
            }
        }
        // structural postconditions
        SymAutomaton e = eliminate_epsilon(a);
        for (const auto& t : e.trans) CHECK(t.letter.has_value());
        SymAutomaton p = prune_unreachable(a);
        std::set<int> reach{p.initial};
        for (bool grew = true; grew;) {
            grew = false;
            for (const auto& t : p.trans)
                if (reach.count(t.src) && !reach.count(t.dst)) {
                    reach.insert(t.dst);
                    grew = true;
                }
        }
        for (const auto& t : p.trans) CHECK(reach.count(t.src));
        CHECK(quotient(a).nstates <= a.nstates);
    }
    CHECK(tested >= 100);  // the budget must not hollow out the property
}

TEST_CASE("simplify: unsatisfiable literal guards are dropped") {
    SymAutomaton a = chain({gl(Guard::of(bexp_cmp(RelOp::Gt, aexp_lit(1), aexp_lit(2))),
                               mk_letter(MoveCtor::Run))});
    CHECK(simplify(a).trans.empty());
}

TEST_CASE("compose: synchronized tags are removed; product and flat agree") {
    NamePool pool;
    TagAtom f = TagAtom::of_ident("f");
    std::vector<std::pair<SymAutomaton, SymAutomaton>> corpus;

    // client asking one question on f, then acting on the answer
    SymName X = pool.fresh(DType::Int, "X");
    SymName Y = pool.fresh(DType::Int, "Y");
    SymAutomaton client1 =
        chain({gl(mk_letter(MoveCtor::Run)), gl(mk_letter(MoveCtor::Q, {f})),
               gl(mk_letter_binder(MoveCtor::Val, Y, {f})),
               gl(Guard::of(bexp_cmp(RelOp::Gt, aexp_name(Y), aexp_lit(0))),
                  mk_letter(MoveCtor::Done))});
    // callee answering with an environment input
    SymAutomaton callee_input =
        chain({gl(mk_letter(MoveCtor::Q)), gl(mk_letter_binder(MoveCtor::Val, X))});
    corpus.emplace_back(client1, rename(callee_input, f));
    // callee answering with a closed expression
    SymAutomaton callee_const = chain(
        {gl(mk_letter(MoveCtor::Q)), gl(mk_letter_exp(MoveCtor::Val, exp_of(aexp_lit(1))))});
    corpus.emplace_back(client1, rename(callee_const, f));

    // a translated client calling a command identifier twice
    Translator tr;
    Judgement jc = parse_judgement("f : com |- f; f : com");
    SymAutomaton client2 = tr.interpret(jc.ctx, beta_normalize(jc.term)).aut;
    Translator tr2;
    SymAutomaton skip_aut = tr2.interpret(Context{}, parse_term("skip")).aut;
    corpus.emplace_back(client2, rename(skip_aut, f));
    // a guarded command callee
    SymName B = pool.fresh(DType::Bool, "B");
    SymAutomaton callee_guarded = chain(
        {gl(Guard::of(bexp_name(B)), mk_letter(MoveCtor::Run)), gl(mk_letter(MoveCtor::Done))});
    corpus.emplace_back(client2, rename(callee_guarded, f));

    for (size_t i = 0; i < corpus.size(); ++i) {
        CAPTURE(i);
        const auto& [client, callee] = corpus[i];
        SymAutomaton prod = compose(client, callee, f);
        SymAutomaton flat = compose_flat(client, callee, f);
        for (const SymAutomaton* a : {&prod, &flat})
            for (const auto& t : a->trans)
                if (t.letter)
                    for (const auto& at : t.letter->tags) CHECK(!tag_equal(at, f));
        CHECK(lang(prod, 3, 12) == lang(flat, 3, 12));
    }

    // concrete expectation: (f; f)[f := skip] behaves as skip; skip
    SymAutomaton twice = compose(client2, rename(skip_aut, f), f);
    CHECK(lang(twice, 2, 12) == std::set<std::string>{"run done"});
    // and with the constant callee, client1 always reaches done
    SymAutomaton always = compose(client1, rename(callee_const, f), f);
    CHECK(lang(always, 2, 12) == std::set<std::string>{"run done"});
}

TEST_CASE("collapse_aliases: plumbing aliases collapse, input aliases survive") {
    NamePool pool;
    SymName N = pool.fresh(DType::Int, "N");
    SymName A = pool.fresh(DType::Int, "A");
    SymName B = pool.fresh(DType::Int, "B");

    SUBCASE("alias of an environment input is kept as an explicit bind") {
        // ?N is supplied by the environment; ?A = N is real data flow
        Guard bindA;
        bindA.atoms.push_back(GuardAtom::of_bind(A, exp_of_name(N)));
        SymAutomaton a = chain({gl(mk_letter(MoveCtor::Q)),
                                gl(mk_letter_binder(MoveCtor::Val, N)),
                                gl(bindA, mk_letter_exp(MoveCtor::Val, exp_of_name(A)))});
        SymAutomaton c = collapse_aliases(a);
        CHECK(has_bind_atom(c));
        CHECK(lang(c, 3, 8) == lang(a, 3, 8));
    }

    SUBCASE("alias of a bind-introduced name is substituted away") {
        // ?A = 1 introduces plumbing; ?B = A is an alias and collapses
        Guard bindA;
        bindA.atoms.push_back(GuardAtom::of_bind(A, exp_of(aexp_lit(1))));
        Guard bindB;
        bindB.atoms.push_back(GuardAtom::of_bind(B, exp_of_name(A)));
        SymAutomaton a = chain({gl(bindA, mk_letter(MoveCtor::Run)),
                                gl(bindB, mk_letter_exp(MoveCtor::Val, exp_of_name(B)))});
        SymAutomaton c = collapse_aliases(a);
        for (const auto& t : c.trans)
            for (const auto& at : t.guard.atoms)
                if (at.kind == GuardAtom::Kind::Bind) CHECK(at.bind_name == A);
        bool payload_is_a = false;
        for (const auto& t : c.trans)
            if (t.letter && t.letter->payload && !t.letter->payload->binder &&
                render(t.letter->payload->expr) == A.display())
                payload_is_a = true;
        CHECK(payload_is_a);
        CHECK(lang(c, 3, 8) == lang(a, 3, 8));
    }

    SUBCASE("a bind whose name is never used afterwards is dropped") {
        Guard bindA;
        bindA.atoms.push_back(GuardAtom::of_bind(A, exp_of(aexp_lit(1))));
        SymAutomaton a = chain({gl(bindA, mk_letter(MoveCtor::Run)),
                                gl(mk_letter(MoveCtor::Done))});
        SymAutomaton c = collapse_aliases(a);
        CHECK(!has_bind_atom(c));
        CHECK(lang(c, 2, 8) == lang(a, 2, 8));
    }
}
