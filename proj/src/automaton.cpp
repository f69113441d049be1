#include "sgc/automaton.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sgc {

namespace {

void append_shifted(SymAutomaton& out, const SymAutomaton& a, int off) {
    for (const auto& t : a.trans)
        out.trans.push_back(Transition{t.src + off, t.guard, t.letter, t.dst + off});
}

std::string trans_key(const Transition& t) {
    std::ostringstream os;
    os << t.src << "|" << t.guard.display() << "|"
       << (t.letter ? render(*t.letter) : std::string("~eps~")) << "|" << t.dst;
    return os.str();
}

void dedupe(SymAutomaton& a) {
    std::set<std::string> seen;
    std::vector<Transition> out;
    for (auto& t : a.trans)
        if (seen.insert(trans_key(t)).second) out.push_back(std::move(t));
    a.trans = std::move(out);
}

/// Rewrites a guard left to right; a Bind atom shadows its name for the
/// rest of the guard and for everything after it (subst is mutated).
Guard rewrite_guard(const Guard& g, std::map<SymName, Exp>& subst) {
    Guard out;
    for (const auto& at : g.atoms) {
        GuardAtom a = at;
        switch (at.kind) {
            case GuardAtom::Kind::Plain: a.plain = rewrite(at.plain, subst); break;
            case GuardAtom::Kind::Bind:
                if (at.bind_rhs) a.bind_rhs = rewrite(*at.bind_rhs, subst);
                subst.erase(at.bind_name);
                break;
            case GuardAtom::Kind::ArrInit: a.arr_value = rewrite(*at.arr_value, subst); break;
            case GuardAtom::Kind::ArrUpdate:
                a.arr_index = rewrite(at.arr_index, subst);
                a.arr_value = rewrite(*at.arr_value, subst);
                break;
        }
        out.atoms.push_back(std::move(a));
    }
    return out;
}

SymLetter rewrite_letter(const SymLetter& m, std::map<SymName, Exp>& subst) {
    SymLetter out = m;
    for (auto& t : out.tags)
        if (t.kind == TagAtom::Kind::Cell) t.cell_index = rewrite(t.cell_index, subst);
    if (out.payload) {
        if (out.payload->binder)
            subst.erase(out.payload->bname);
        else
            out.payload->expr = rewrite(out.payload->expr, subst);
    }
    return out;
}

BExpP exp_eq(const Exp& a, const Exp& b) {
    if (a.dtype == DType::Int && b.dtype == DType::Int) return bexp_cmp(RelOp::Eq, a.a, b.a);
    if (a.dtype == DType::Bool && b.dtype == DType::Bool)
        return bexp_or(bexp_and(a.b, b.b), bexp_and(bexp_not(a.b), bexp_not(b.b)));
    throw std::runtime_error("payload type mismatch in synchronization");
}

/// Unifies two rewritten payloads. Appends conjuncts to `extra`; when
/// substitution is allowed, binder-vs-expression is recorded in the binder
/// side's map instead. Returns the surviving payload (for intersect).
std::optional<Payload> unify_payloads(const std::optional<Payload>& p1,
                                      const std::optional<Payload>& p2, Guard& extra,
                                      std::map<SymName, Exp>* sub1,
                                      std::map<SymName, Exp>* sub2, bool substitute) {
    if (!p1 && !p2) return std::nullopt;
    if (!p1 || !p2) throw std::runtime_error("payload arity mismatch in synchronization");
    if (!p1->binder && !p2->binder) {
        extra.atoms.push_back(GuardAtom::of_plain(exp_eq(p1->expr, p2->expr)));
        return p1;
    }
    if (p1->binder && !p2->binder) {
        if (substitute && sub1)
            (*sub1)[p1->bname] = p2->expr;
        else
            extra.atoms.push_back(GuardAtom::of_bind(p1->bname, p2->expr));
        return p2;
    }
    if (!p1->binder && p2->binder) {
        if (substitute && sub2)
            (*sub2)[p2->bname] = p1->expr;
        else
            extra.atoms.push_back(GuardAtom::of_bind(p2->bname, p1->expr));
        return p1;
    }
    // both binders: one fresh environment input shared by both names
    extra.atoms.push_back(GuardAtom::of_bind(p1->bname, std::nullopt));
    Exp asname = exp_of_name(p1->bname);
    if (substitute && sub2)
        (*sub2)[p2->bname] = asname;
    else
        extra.atoms.push_back(GuardAtom::of_bind(p2->bname, asname));
    return Payload::of_exp(asname);
}

bool sync_letter(const SymLetter& m, const TagAtom& tag) {
    return m.tags.size() == 1 && tag_equal(m.tags[0], tag);
}

std::vector<std::vector<const Transition*>> outgoing(const SymAutomaton& a) {
    std::vector<std::vector<const Transition*>> out(a.nstates);
    for (const auto& t : a.trans) out[t.src].push_back(&t);
    return out;
}

std::string subst_sig(const std::map<SymName, Exp>& s) {
    std::ostringstream os;
    for (const auto& [k, v] : s) os << k.index << "=" << render(v) << ";";
    return os.str();
}

}  // namespace

SymAutomaton aut_empty() {
    SymAutomaton a;
    a.nstates = 1;
    return a;
}

SymAutomaton aut_epsilon() {
    SymAutomaton a;
    a.nstates = 1;
    a.finals.insert(0);
    return a;
}

SymAutomaton aut_letter(GuardedLetter b) {
    SymAutomaton a;
    a.nstates = 2;
    a.finals.insert(1);
    a.trans.push_back(Transition{0, std::move(b.guard), std::move(b.letter), 1});
    return a;
}

SymAutomaton concat(const SymAutomaton& a, const SymAutomaton& b) {
    SymAutomaton out;
    out.nstates = a.nstates + b.nstates;
    out.initial = a.initial;
    append_shifted(out, a, 0);
    append_shifted(out, b, a.nstates);
    for (int f : a.finals)
        out.trans.push_back(Transition{f, Guard::tt(), std::nullopt, b.initial + a.nstates});
    for (int f : b.finals) out.finals.insert(f + a.nstates);
    return out;
}

SymAutomaton alt(const SymAutomaton& a, const SymAutomaton& b) {
    SymAutomaton out;
    out.nstates = 1 + a.nstates + b.nstates;
    out.initial = 0;
    append_shifted(out, a, 1);
    append_shifted(out, b, 1 + a.nstates);
    out.trans.push_back(Transition{0, Guard::tt(), std::nullopt, a.initial + 1});
    out.trans.push_back(Transition{0, Guard::tt(), std::nullopt, b.initial + 1 + a.nstates});
    for (int f : a.finals) out.finals.insert(f + 1);
    for (int f : b.finals) out.finals.insert(f + 1 + a.nstates);
    return out;
}

SymAutomaton star(const SymAutomaton& a) {
    SymAutomaton out;
    out.nstates = 1 + a.nstates;
    out.initial = 0;
    out.finals.insert(0);
    append_shifted(out, a, 1);
    out.trans.push_back(Transition{0, Guard::tt(), std::nullopt, a.initial + 1});
    for (int f : a.finals) out.trans.push_back(Transition{f + 1, Guard::tt(), std::nullopt, 0});
    return out;
}

SymAutomaton intersect(const SymAutomaton& a, const SymAutomaton& b) {
    SymAutomaton out;
    std::map<std::pair<int, int>, int> ids;
    std::deque<std::pair<int, int>> work;
    auto oa = outgoing(a), ob = outgoing(b);
    auto id_of = [&](int s1, int s2) {
        auto [it, fresh] = ids.try_emplace({s1, s2}, out.nstates);
        if (fresh) {
            ++out.nstates;
            work.push_back({s1, s2});
            if (a.finals.count(s1) && b.finals.count(s2)) out.finals.insert(it->second);
        }
        return it->second;
    };
    out.initial = id_of(a.initial, b.initial);
    while (!work.empty()) {
        auto [s1, s2] = work.front();
        work.pop_front();
        int src = ids[{s1, s2}];
        for (const Transition* t1 : oa[s1]) {
            if (!t1->letter) {
                out.trans.push_back(Transition{src, t1->guard, std::nullopt, id_of(t1->dst, s2)});
                continue;
            }
            for (const Transition* t2 : ob[s2]) {
                if (!t2->letter) continue;
                const SymLetter& m1 = *t1->letter;
                const SymLetter& m2 = *t2->letter;
                if (m1.ctor != m2.ctor || m1.tags.size() != m2.tags.size()) continue;
                bool tags_ok = true;
                for (size_t i = 0; i < m1.tags.size(); ++i)
                    if (!tag_equal(m1.tags[i], m2.tags[i])) {
                        tags_ok = false;
                        break;
                    }
                if (!tags_ok) continue;
                Guard extra;
                auto payload =
                    unify_payloads(m1.payload, m2.payload, extra, nullptr, nullptr, false);
                SymLetter m = m1;
                m.payload = payload;
                Guard g = t1->guard.then(t2->guard).then(extra);
                out.trans.push_back(Transition{src, std::move(g), std::move(m),
                                               id_of(t1->dst, t2->dst)});
            }
        }
        for (const Transition* t2 : ob[s2])
            if (!t2->letter)
                out.trans.push_back(Transition{src, t2->guard, std::nullopt, id_of(s1, t2->dst)});
    }
    if (out.nstates == 0) out.nstates = 1;
    return out;
}

SymAutomaton shuffle(const SymAutomaton& a, const SymAutomaton& b) {
    SymAutomaton out;
    out.nstates = a.nstates * b.nstates;
    auto id_of = [&](int s1, int s2) { return s1 * b.nstates + s2; };
    out.initial = id_of(a.initial, b.initial);
    for (int s1 = 0; s1 < a.nstates; ++s1)
        for (int s2 = 0; s2 < b.nstates; ++s2) {
            if (a.finals.count(s1) && b.finals.count(s2)) out.finals.insert(id_of(s1, s2));
        }
    for (const auto& t : a.trans)
        for (int s2 = 0; s2 < b.nstates; ++s2)
            out.trans.push_back(Transition{id_of(t.src, s2), t.guard, t.letter, id_of(t.dst, s2)});
    for (const auto& t : b.trans)
        for (int s1 = 0; s1 < a.nstates; ++s1)
            out.trans.push_back(Transition{id_of(s1, t.src), t.guard, t.letter, id_of(s1, t.dst)});
    return out;
}

SymAutomaton rename(const SymAutomaton& a, const TagAtom& tag) {
    SymAutomaton out = a;
    for (auto& t : out.trans) {
        if (!t.letter) continue;
        if (t.src == a.initial || a.finals.count(t.dst)) {
            // new tag is outermost: (m^{old})^{tag} = m^{tag,old}
            t.letter->tags.insert(t.letter->tags.begin(), tag);
        }
    }
    return out;
}

SymAutomaton compose(const SymAutomaton& a1, const SymAutomaton& a2, const TagAtom& tag,
                     bool substitute) {
    using Subst = std::map<SymName, Exp>;
    struct PState {
        int s1;
        Subst sub1;
        int s2;  // meaningful in phase 1; i2 at rest
        Subst sub2;
        int phase;  // 0 = rest (a1 active), 1 = in call (a2 active)
    };
    SymAutomaton out;
    std::map<std::string, int> ids;
    std::deque<PState> work;
    auto oa1 = outgoing(a1), oa2 = outgoing(a2);
    auto key_of = [](const PState& p) {
        std::ostringstream os;
        os << p.s1 << "#" << subst_sig(p.sub1) << "#" << p.s2 << "#" << subst_sig(p.sub2) << "#"
           << p.phase;
        return os.str();
    };
    auto id_of = [&](PState p) {
        std::string k = key_of(p);
        auto [it, fresh] = ids.try_emplace(k, out.nstates);
        if (fresh) {
            ++out.nstates;
            if (p.phase == 0 && a1.finals.count(p.s1)) out.finals.insert(it->second);
            work.push_back(std::move(p));
        }
        return it->second;
    };
    out.initial = id_of(PState{a1.initial, {}, a2.initial, {}, 0});
    while (!work.empty()) {
        PState p = work.front();
        work.pop_front();
        int src = ids[key_of(p)];
        if (p.phase == 0) {
            for (const Transition* t1 : oa1[p.s1]) {
                Subst sub1 = p.sub1;
                Guard g = rewrite_guard(t1->guard, sub1);
                if (!t1->letter) {
                    out.trans.push_back(Transition{
                        src, std::move(g), std::nullopt,
                        id_of(PState{t1->dst, std::move(sub1), p.s2, p.sub2, 0})});
                    continue;
                }
                if (!sync_letter(*t1->letter, tag)) {
                    SymLetter m = rewrite_letter(*t1->letter, sub1);
                    out.trans.push_back(Transition{
                        src, std::move(g), std::move(m),
                        id_of(PState{t1->dst, std::move(sub1), p.s2, p.sub2, 0})});
                    continue;
                }
                if (!t1->letter->question()) continue;  // stray answer: pruned
                for (const Transition* t2 : oa2[a2.initial]) {
                    if (!t2->letter || !sync_letter(*t2->letter, tag)) continue;
                    if (t2->letter->ctor != t1->letter->ctor) continue;
                    Subst s1c = sub1, s2c = p.sub2;
                    Guard g2 = rewrite_guard(t2->guard, s2c);
                    auto p1 = t1->letter->payload, p2 = t2->letter->payload;
                    if (p1 && !p1->binder) p1->expr = rewrite(p1->expr, s1c);
                    if (p2 && !p2->binder) p2->expr = rewrite(p2->expr, s2c);
                    if (p1 && p1->binder) s1c.erase(p1->bname);
                    if (p2 && p2->binder) s2c.erase(p2->bname);
                    Guard extra;
                    unify_payloads(p1, p2, extra, &s1c, &s2c, substitute);
                    Guard total = g.then(g2).then(extra);
                    out.trans.push_back(Transition{
                        src, std::move(total), std::nullopt,
                        id_of(PState{t1->dst, std::move(s1c), t2->dst, std::move(s2c), 1})});
                }
            }
        } else {
            for (const Transition* t2 : oa2[p.s2]) {
                Subst sub2 = p.sub2;
                Guard g = rewrite_guard(t2->guard, sub2);
                if (!t2->letter) {
                    out.trans.push_back(Transition{
                        src, std::move(g), std::nullopt,
                        id_of(PState{p.s1, p.sub1, t2->dst, std::move(sub2), 1})});
                    continue;
                }
                if (!sync_letter(*t2->letter, tag)) {
                    SymLetter m = rewrite_letter(*t2->letter, sub2);
                    out.trans.push_back(Transition{
                        src, std::move(g), std::move(m),
                        id_of(PState{p.s1, p.sub1, t2->dst, std::move(sub2), 1})});
                    continue;
                }
                if (t2->letter->question() || !a2.finals.count(t2->dst)) continue;
                for (const Transition* t1 : oa1[p.s1]) {
                    if (!t1->letter || !sync_letter(*t1->letter, tag)) continue;
                    if (t1->letter->ctor != t2->letter->ctor) continue;
                    Subst s1c = p.sub1, s2c = sub2;
                    Guard g1 = rewrite_guard(t1->guard, s1c);
                    auto p1 = t1->letter->payload, p2 = t2->letter->payload;
                    if (p1 && !p1->binder) p1->expr = rewrite(p1->expr, s1c);
                    if (p2 && !p2->binder) p2->expr = rewrite(p2->expr, s2c);
                    if (p1 && p1->binder) s1c.erase(p1->bname);
                    if (p2 && p2->binder) s2c.erase(p2->bname);
                    Guard extra;
                    unify_payloads(p1, p2, extra, &s1c, &s2c, substitute);
                    // the callee's answer happens first, then the caller resumes
                    Guard total = g.then(g1).then(extra);
                    out.trans.push_back(Transition{
                        src, std::move(total), std::nullopt,
                        id_of(PState{t1->dst, std::move(s1c), a2.initial, {}, 0})});
                }
            }
            // guard-only steps of the pending caller
            for (const Transition* t1 : oa1[p.s1]) {
                if (t1->letter) continue;
                Subst sub1 = p.sub1;
                Guard g = rewrite_guard(t1->guard, sub1);
                out.trans.push_back(Transition{src, std::move(g), std::nullopt,
                                               id_of(PState{t1->dst, std::move(sub1), p.s2,
                                                            p.sub2, 1})});
            }
        }
    }
    if (out.nstates == 0) out.nstates = 1;
    dedupe(out);
    return out;
}

SymAutomaton compose_flat(const SymAutomaton& a1, const SymAutomaton& a2, const TagAtom& tag) {
    SymAutomaton out;
    out.nstates = a1.nstates + a2.nstates;
    out.initial = a1.initial;
    out.finals = a1.finals;
    int off = a1.nstates;
    for (const auto& t : a1.trans)
        if (!t.letter || !sync_letter(*t.letter, tag)) out.trans.push_back(t);
    for (const auto& t : a2.trans)
        if (!t.letter || !sync_letter(*t.letter, tag))
            out.trans.push_back(Transition{t.src + off, t.guard, t.letter, t.dst + off});
    for (const auto& t1 : a1.trans) {
        if (!t1.letter || !sync_letter(*t1.letter, tag)) continue;
        for (const auto& t2 : a2.trans) {
            if (!t2.letter || !sync_letter(*t2.letter, tag)) continue;
            if (t1.letter->ctor != t2.letter->ctor) continue;
            if (t1.letter->question()) {
                if (t2.src != a2.initial) continue;
                Guard extra;
                unify_payloads(t1.letter->payload, t2.letter->payload, extra, nullptr, nullptr,
                               false);
                Guard g = t1.guard.then(t2.guard).then(extra);
                out.trans.push_back(Transition{t1.src, std::move(g), std::nullopt, t2.dst + off});
            } else {
                if (!a2.finals.count(t2.dst)) continue;
                Guard extra;
                unify_payloads(t1.letter->payload, t2.letter->payload, extra, nullptr, nullptr,
                               false);
                Guard g = t2.guard.then(t1.guard).then(extra);
                out.trans.push_back(Transition{t2.src + off, std::move(g), std::nullopt, t1.dst});
            }
        }
    }
    dedupe(out);
    return out;
}

SymAutomaton restrict(const SymAutomaton& a, const std::function<bool(const SymLetter&)>& sel) {
    SymAutomaton out = a;
    for (auto& t : out.trans) {
        if (!t.letter || !sel(*t.letter)) continue;
        if (t.letter->payload && t.letter->payload->binder)
            t.guard.atoms.push_back(GuardAtom::of_bind(t.letter->payload->bname, std::nullopt));
        t.letter = std::nullopt;
    }
    return out;
}

std::function<bool(const SymLetter&)> tag_selector(const TagAtom& t) {
    return [t](const SymLetter& m) { return !m.tags.empty() && tag_equal(m.tags[0], t); };
}

namespace {

/// Simple epsilon paths from q: (reachable state, accumulated guard).
void eps_closure_from(const std::vector<std::vector<const Transition*>>& out, int q,
                      std::vector<int>& onpath, Guard acc,
                      std::vector<std::pair<int, Guard>>& res) {
    res.push_back({q, acc});
    for (const Transition* t : out[q]) {
        if (t->letter) continue;
        if (std::find(onpath.begin(), onpath.end(), t->dst) != onpath.end()) continue;
        onpath.push_back(t->dst);
        eps_closure_from(out, t->dst, onpath, acc.then(t->guard), res);
        onpath.pop_back();
    }
}

}  // namespace

SymAutomaton eliminate_epsilon(const SymAutomaton& a) {
    auto out_edges = outgoing(a);
    // reject epsilon cycles that carry binding conjuncts
    for (const auto& t : a.trans) {
        if (t.letter || !t.guard.has_bind()) continue;
        std::vector<int> onpath{t.dst};
        std::vector<std::pair<int, Guard>> reach;
        eps_closure_from(out_edges, t.dst, onpath, Guard::tt(), reach);
        for (auto& [s, g] : reach)
            if (s == t.src)
                throw std::runtime_error("epsilon cycle with binding conjunct");
    }
    std::vector<std::vector<std::pair<int, Guard>>> closures(a.nstates);
    for (int q = 0; q < a.nstates; ++q) {
        std::vector<int> onpath{q};
        eps_closure_from(out_edges, q, onpath, Guard::tt(), closures[q]);
    }
    SymAutomaton res;
    res.nstates = a.nstates;
    res.initial = a.initial;
    res.finals = a.finals;
    res.accept_empty = a.accept_empty;
    int sink = -1;
    auto get_sink = [&]() {
        if (sink < 0) {
            sink = res.nstates++;
            res.finals.insert(sink);
        }
        return sink;
    };
    // unguarded epsilon-acceptance folds into the final-state set
    for (int q = 0; q < a.nstates; ++q)
        for (const auto& [s, g] : closures[q])
            if (a.finals.count(s) && g.is_tt()) res.finals.insert(q);
    for (int q = 0; q < a.nstates; ++q) {
        for (const auto& [mid, ge] : closures[q]) {
            for (const Transition* t : out_edges[mid]) {
                if (!t->letter) continue;
                Guard g = ge.then(t->guard);
                res.trans.push_back(Transition{q, g, t->letter, t->dst});
                // guarded epsilon-acceptance after the last real letter
                for (const auto& [fin, gf] : closures[t->dst])
                    if (a.finals.count(fin) && !gf.is_tt())
                        res.trans.push_back(
                            Transition{q, g.then(gf), t->letter, get_sink()});
            }
        }
    }
    for (const auto& [fin, gf] : closures[a.initial])
        if (a.finals.count(fin) && !gf.is_tt()) res.accept_empty.push_back(gf);
    dedupe(res);
    return res;
}

SymAutomaton prune_unreachable(const SymAutomaton& a) {
    std::vector<bool> seen(a.nstates, false);
    std::deque<int> work{a.initial};
    seen[a.initial] = true;
    auto out_edges = outgoing(a);
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (const Transition* t : out_edges[q])
            if (!seen[t->dst]) {
                seen[t->dst] = true;
                work.push_back(t->dst);
            }
    }
    std::vector<int> remap(a.nstates, -1);
    SymAutomaton res;
    for (int q = 0; q < a.nstates; ++q)
        if (seen[q]) remap[q] = res.nstates++;
    res.initial = remap[a.initial];
    for (int f : a.finals)
        if (remap[f] >= 0) res.finals.insert(remap[f]);
    for (const auto& t : a.trans)
        if (remap[t.src] >= 0 && remap[t.dst] >= 0)
            res.trans.push_back(Transition{remap[t.src], t.guard, t.letter, remap[t.dst]});
    res.accept_empty = a.accept_empty;
    return res;
}

SymAutomaton trim(const SymAutomaton& a) {
    SymAutomaton fwd = prune_unreachable(a);
    std::vector<bool> co(fwd.nstates, false);
    std::deque<int> work;
    for (int f : fwd.finals) {
        co[f] = true;
        work.push_back(f);
    }
    std::vector<std::vector<int>> preds(fwd.nstates);
    for (const auto& t : fwd.trans) preds[t.dst].push_back(t.src);
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int p : preds[q])
            if (!co[p]) {
                co[p] = true;
                work.push_back(p);
            }
    }
    co[fwd.initial] = true;  // keep the initial state even for the empty language
    std::vector<int> remap(fwd.nstates, -1);
    SymAutomaton res;
    for (int q = 0; q < fwd.nstates; ++q)
        if (co[q]) remap[q] = res.nstates++;
    res.initial = remap[fwd.initial];
    for (int f : fwd.finals) res.finals.insert(remap[f]);
    for (const auto& t : fwd.trans)
        if (remap[t.src] >= 0 && remap[t.dst] >= 0)
            res.trans.push_back(Transition{remap[t.src], t.guard, t.letter, remap[t.dst]});
    res.accept_empty = fwd.accept_empty;
    return res;
}

namespace {

/// Folds one guard; returns false if a conjunct is constantly ff.
bool fold_guard(Guard& g) {
    std::vector<GuardAtom> atoms;
    for (auto at : g.atoms) {
        switch (at.kind) {
            case GuardAtom::Kind::Plain: {
                at.plain = fold(at.plain);
                if (auto v = as_literal(at.plain)) {
                    if (!*v) return false;
                    continue;  // drop tt
                }
                break;
            }
            case GuardAtom::Kind::Bind:
                if (at.bind_rhs) {
                    if (at.bind_rhs->dtype == DType::Int)
                        at.bind_rhs = exp_of(fold(at.bind_rhs->a));
                    else
                        at.bind_rhs = exp_of(fold(at.bind_rhs->b));
                }
                break;
            case GuardAtom::Kind::ArrInit:
            case GuardAtom::Kind::ArrUpdate:
                if (at.arr_index) at.arr_index = fold(at.arr_index);
                if (at.arr_value->dtype == DType::Int)
                    at.arr_value = exp_of(fold(at.arr_value->a));
                else
                    at.arr_value = exp_of(fold(at.arr_value->b));
                break;
        }
        atoms.push_back(std::move(at));
    }
    g.atoms = std::move(atoms);
    return true;
}

}  // namespace

SymAutomaton simplify(const SymAutomaton& a) {
    SymAutomaton res = a;
    res.trans.clear();
    for (auto t : a.trans) {
        if (!fold_guard(t.guard)) continue;
        if (t.letter) {
            for (auto& tag : t.letter->tags)
                if (tag.kind == TagAtom::Kind::Cell) tag.cell_index = fold(tag.cell_index);
            if (t.letter->payload && !t.letter->payload->binder) {
                auto& e = t.letter->payload->expr;
                e = e.dtype == DType::Int ? exp_of(fold(e.a)) : exp_of(fold(e.b));
            }
        }
        res.trans.push_back(std::move(t));
    }
    std::vector<Guard> ae;
    for (auto g : a.accept_empty)
        if (fold_guard(g)) ae.push_back(std::move(g));
    res.accept_empty = std::move(ae);
    dedupe(res);
    return res;
}

SymAutomaton normalize(const SymAutomaton& a) {
    auto out_edges = outgoing(a);
    std::vector<int> remap(a.nstates, -1);
    int next = 0;
    std::deque<int> work{a.initial};
    remap[a.initial] = next++;
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        std::vector<std::pair<std::string, int>> succ;
        for (const Transition* t : out_edges[q])
            succ.push_back({trans_key(*t), t->dst});
        std::sort(succ.begin(), succ.end());
        for (auto& [k, d] : succ)
            if (remap[d] < 0) {
                remap[d] = next++;
                work.push_back(d);
            }
    }
    SymAutomaton res;
    res.nstates = next;
    res.initial = 0;
    for (int f : a.finals)
        if (remap[f] >= 0) res.finals.insert(remap[f]);
    for (const auto& t : a.trans)
        if (remap[t.src] >= 0 && remap[t.dst] >= 0)
            res.trans.push_back(Transition{remap[t.src], t.guard, t.letter, remap[t.dst]});
    res.accept_empty = a.accept_empty;
    std::sort(res.trans.begin(), res.trans.end(), [](const Transition& x, const Transition& y) {
        if (x.src != y.src) return x.src < y.src;
        std::string kx = trans_key(x), ky = trans_key(y);
        return kx < ky;
    });
    return res;
}

namespace {

// One read/kill step of a transition, in temporal order: every guard atom,
// then the letter (tags and payload are read, a binder payload kills).
struct FlowOp {
    std::set<SymName> uses;
    std::optional<SymName> kill;
};

void collect_exp_names(const Exp& e, std::set<SymName>& out) {
    if (e.a) collect_names(e.a, out);
    if (e.b) collect_names(e.b, out);
}

std::vector<FlowOp> flow_ops(const Transition& t) {
    std::vector<FlowOp> ops;
    for (const auto& at : t.guard.atoms) {
        FlowOp op;
        switch (at.kind) {
            case GuardAtom::Kind::Plain: collect_names(at.plain, op.uses); break;
            case GuardAtom::Kind::Bind:
                if (at.bind_rhs) collect_exp_names(*at.bind_rhs, op.uses);
                op.kill = at.bind_name;
                break;
            case GuardAtom::Kind::ArrInit: collect_exp_names(*at.arr_value, op.uses); break;
            case GuardAtom::Kind::ArrUpdate:
                collect_names(at.arr_index, op.uses);
                collect_exp_names(*at.arr_value, op.uses);
                break;
        }
        ops.push_back(std::move(op));
    }
    if (t.letter) {
        FlowOp op;
        for (const auto& tag : t.letter->tags)
            if (tag.kind == TagAtom::Kind::Cell) collect_names(tag.cell_index, op.uses);
        if (t.letter->payload) {
            if (t.letter->payload->binder)
                op.kill = t.letter->payload->bname;
            else
                collect_exp_names(t.letter->payload->expr, op.uses);
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

// Names that may be read before being rebound, per state (backward fixpoint).
std::vector<std::set<SymName>> liveness(const SymAutomaton& a) {
    std::vector<std::set<SymName>> live(a.nstates);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : a.trans) {
            std::set<SymName> l = live[t.dst];
            auto ops = flow_ops(t);
            for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
                if (it->kill) l.erase(*it->kill);
                l.insert(it->uses.begin(), it->uses.end());
            }
            for (const auto& n : l)
                if (live[t.src].insert(n).second) changed = true;
        }
    }
    return live;
}

using AliasMap = std::map<SymName, SymName>;

std::map<SymName, Exp> alias_subst(const AliasMap& sigma) {
    std::map<SymName, Exp> sub;
    for (const auto& [k, v] : sigma) sub.emplace(k, exp_of_name(v));
    return sub;
}

std::string alias_key(int s, const AliasMap& sigma) {
    std::string k = std::to_string(s);
    for (const auto& [a, b] : sigma)
        k += "|" + std::to_string(a.index) + ">" + std::to_string(b.index);
    return k;
}

// If e is a bare name of the right type, returns it.
std::optional<SymName> as_name(const Exp& e) {
    if (e.a && e.a->kind == AExp::Kind::Name) return e.a->name;
    if (e.b && e.b->kind == BExp::Kind::Name) return e.b->name;
    return std::nullopt;
}

}  // namespace

SymAutomaton collapse_aliases(const SymAutomaton& a) {
    auto live = liveness(a);
    // Environment inputs (binder-bound names) are kept as explicit binds —
    // an alias to an input is a genuine data-flow fact worth displaying —
    // while aliases to bind-introduced plumbing names are collapsed.
    std::set<SymName> inputs;
    for (const auto& t : a.trans)
        if (t.letter && t.letter->payload && t.letter->payload->binder)
            inputs.insert(t.letter->payload->bname);
    SymAutomaton out;
    out.accept_empty = a.accept_empty;
    std::map<std::string, int> ids;
    std::vector<std::pair<int, AliasMap>> states;
    auto state_id = [&](int s, const AliasMap& sigma) {
        std::string k = alias_key(s, sigma);
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        int id = out.nstates++;
        ids.emplace(k, id);
        states.emplace_back(s, sigma);
        if (a.finals.count(s)) out.finals.insert(id);
        return id;
    };
    out.initial = state_id(a.initial, {});
    for (int cur = 0; cur < (int)states.size(); ++cur) {
        auto [s, sigma0] = states[cur];
        for (const auto& t : a.trans) {
            if (t.src != s) continue;
            // live_before[i] = names that may be read at or after op i before
            // being rebound; index ops.size() is the state liveness at dst.
            auto ops = flow_ops(t);
            std::vector<std::set<SymName>> live_before(ops.size() + 1);
            live_before[ops.size()] = live[t.dst];
            for (int i = (int)ops.size() - 1; i >= 0; --i) {
                live_before[i] = live_before[i + 1];
                if (ops[i].kill) live_before[i].erase(*ops[i].kill);
                live_before[i].insert(ops[i].uses.begin(), ops[i].uses.end());
            }
            AliasMap sigma = sigma0;
            std::vector<GuardAtom> atoms;
            // Drops aliases targeting the name rebound at op i, emitting a
            // bind that saves the old value when the alias is still live.
            auto rebind = [&](const SymName& n, size_t i) {
                for (auto it = sigma.begin(); it != sigma.end();) {
                    if (!(it->second < n) && !(n < it->second)) {
                        if (live_before[i + 1].count(it->first))
                            atoms.push_back(
                                GuardAtom::of_bind(it->first, exp_of_name(n)));
                        it = sigma.erase(it);
                    } else {
                        ++it;
                    }
                }
                sigma.erase(n);
            };
            size_t i = 0;
            for (const auto& at : t.guard.atoms) {
                auto sub = alias_subst(sigma);
                switch (at.kind) {
                    case GuardAtom::Kind::Plain: {
                        GuardAtom o = at;
                        o.plain = rewrite(at.plain, sub);
                        atoms.push_back(std::move(o));
                        break;
                    }
                    case GuardAtom::Kind::Bind: {
                        std::optional<Exp> rhs;
                        if (at.bind_rhs) rhs = rewrite(*at.bind_rhs, sub);
                        rebind(at.bind_name, i);
                        std::optional<SymName> n;
                        if (rhs) n = as_name(*rhs);
                        if (!live_before[i + 1].count(at.bind_name)) {
                            // the bound name is never read before its next
                            // rebinding: the bind constrains nothing
                        } else if (n && !(*n < at.bind_name) && !(at.bind_name < *n)) {
                            // X := X is a no-op
                        } else if (n && !inputs.count(*n)) {
                            sigma.emplace(at.bind_name, *n);
                        } else {
                            atoms.push_back(GuardAtom::of_bind(at.bind_name, rhs));
                        }
                        break;
                    }
                    case GuardAtom::Kind::ArrInit: {
                        GuardAtom o = at;
                        o.arr_value = rewrite(*at.arr_value, sub);
                        atoms.push_back(std::move(o));
                        break;
                    }
                    case GuardAtom::Kind::ArrUpdate: {
                        GuardAtom o = at;
                        o.arr_index = rewrite(at.arr_index, sub);
                        o.arr_value = rewrite(*at.arr_value, sub);
                        atoms.push_back(std::move(o));
                        break;
                    }
                }
                ++i;
            }
            std::optional<SymLetter> letter = t.letter;
            if (letter) {
                auto sub = alias_subst(sigma);
                for (auto& tag : letter->tags)
                    if (tag.kind == TagAtom::Kind::Cell)
                        tag.cell_index = rewrite(tag.cell_index, sub);
                if (letter->payload) {
                    if (letter->payload->binder)
                        rebind(letter->payload->bname, i);
                    else
                        letter->payload->expr = rewrite(letter->payload->expr, sub);
                }
            }
            int dst = state_id(t.dst, sigma);
            out.trans.push_back({cur, Guard{std::move(atoms)}, std::move(letter), dst});
        }
    }
    return out;
}

SymAutomaton quotient(const SymAutomaton& a) {
    std::vector<int> block(a.nstates);
    for (int q = 0; q < a.nstates; ++q) block[q] = a.finals.count(q) ? 1 : 0;
    auto out_edges = outgoing(a);
    bool changed = true;
    while (changed) {
        std::map<std::string, int> sigs;
        std::vector<int> nb(a.nstates);
        for (int q = 0; q < a.nstates; ++q) {
            std::vector<std::string> parts;
            for (const Transition* t : out_edges[q]) {
                std::ostringstream os;
                os << t->guard.display() << "|" << (t->letter ? render(*t->letter) : "~eps~")
                   << "|" << block[t->dst];
                parts.push_back(os.str());
            }
            std::sort(parts.begin(), parts.end());
            parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
            std::ostringstream os;
            os << block[q] << "@";
            for (auto& p : parts) os << p << ";";
            auto [it, fresh] = sigs.try_emplace(os.str(), static_cast<int>(sigs.size()));
            nb[q] = it->second;
        }
        changed = nb != block;
        block = std::move(nb);
    }
    int nblocks = *std::max_element(block.begin(), block.end()) + 1;
    SymAutomaton res;
    res.nstates = nblocks;
    res.initial = block[a.initial];
    for (int f : a.finals) res.finals.insert(block[f]);
    for (const auto& t : a.trans)
        res.trans.push_back(Transition{block[t.src], t.guard, t.letter, block[t.dst]});
    res.accept_empty = a.accept_empty;
    dedupe(res);
    return normalize(res);
}

std::string RawWord::display() const {
    std::ostringstream os;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (i) os << " ";
        os << render(letters[i]);
    }
    if (!trailing.is_tt()) os << " [" << trailing.display() << "]$";
    return os.str();
}

namespace {

void enum_words(const SymAutomaton& a, const std::vector<std::vector<const Transition*>>& out,
                int q, std::vector<GuardedLetter>& word, const Guard& pending,
                std::set<int>& eps_seen, int max_len, std::vector<RawWord>& res) {
    if (a.finals.count(q)) res.push_back(RawWord{word, pending});
    for (const Transition* t : out[q]) {
        if (!t->letter) {
            if (eps_seen.count(t->dst)) continue;
            eps_seen.insert(t->dst);
            enum_words(a, out, t->dst, word, pending.then(t->guard), eps_seen, max_len, res);
            eps_seen.erase(t->dst);
        } else {
            if (static_cast<int>(word.size()) >= max_len) continue;
            word.push_back(gl(pending.then(t->guard), *t->letter));
            std::set<int> fresh{t->dst};
            enum_words(a, out, t->dst, word, Guard::tt(), fresh, max_len, res);
            word.pop_back();
        }
    }
}

}  // namespace

std::vector<RawWord> enumerate_raw_words(const SymAutomaton& a, int max_len) {
    std::vector<RawWord> res;
    for (const auto& g : a.accept_empty) res.push_back(RawWord{{}, g});
    auto out_edges = outgoing(a);
    std::vector<GuardedLetter> word;
    std::set<int> eps_seen{a.initial};
    enum_words(a, out_edges, a.initial, word, Guard::tt(), eps_seen, max_len, res);
    return res;
}

std::set<std::string> raw_language(const SymAutomaton& a, int max_len) {
    std::set<std::string> res;
    for (const auto& w : enumerate_raw_words(a, max_len)) res.insert(w.display());
    return res;
}

std::string to_dot(const SymAutomaton& a) {
    std::ostringstream os;
    os << "digraph model {\n  rankdir=LR;\n  __start [shape=none,label=\"\"];\n";
    for (int q = 0; q < a.nstates; ++q)
        os << "  s" << q << " [shape=" << (a.finals.count(q) ? "doublecircle" : "circle")
           << ",label=\"" << q << "\"];\n";
    os << "  __start -> s" << a.initial << ";\n";
    for (const auto& t : a.trans) {
        std::string label = t.letter ? render(gl(t.guard, *t.letter))
                                     : (t.guard.is_tt() ? std::string("eps")
                                                        : "[" + t.guard.display() + "] eps");
        std::string esc;
        for (char c : label) {
            if (c == '"' || c == '\\') esc += '\\';
            esc += c;
        }
        os << "  s" << t.src << " -> s" << t.dst << " [label=\"" << esc << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace sgc
