#include "sgc/plays.hpp"

#include <algorithm>
#include <sstream>

namespace sgc {

namespace {

// Stamps unversioned function applications with the tracker's current
// version so later array events do not retroactively change the reading.
AExpP stamp(const AExpP& a, const std::map<SymName, int>& ver) {
    if (!a) return a;
    switch (a->kind) {
        case AExp::Kind::Lit:
        case AExp::Kind::Name: return a;
        case AExp::Kind::Bin: return aexp_bin(a->op, stamp(a->lhs, ver), stamp(a->rhs, ver));
        case AExp::Kind::FunApp: {
            AExpP ix = stamp(a->index, ver);
            int v = a->version;
            if (v < 0) {
                auto it = ver.find(a->fun.name);
                if (it == ver.end())
                    throw std::logic_error("array read before initialization in play");
                v = it->second;
            }
            return aexp_funapp(a->fun, ix, v);
        }
    }
    return a;
}

BExpP stamp(const BExpP& b, const std::map<SymName, int>& ver) {
    if (!b) return b;
    switch (b->kind) {
        case BExp::Kind::Lit:
        case BExp::Kind::Name: return b;
        case BExp::Kind::Cmp: return bexp_cmp(b->rel, stamp(b->al, ver), stamp(b->ar, ver));
        case BExp::Kind::Not: return bexp_not(stamp(b->bl, ver));
        case BExp::Kind::And: return bexp_and(stamp(b->bl, ver), stamp(b->br, ver));
        case BExp::Kind::Or: return bexp_or(stamp(b->bl, ver), stamp(b->br, ver));
    }
    return b;
}

Exp stamp(const Exp& e, const std::map<SymName, int>& ver) {
    Exp r = e;
    r.a = stamp(e.a, ver);
    r.b = stamp(e.b, ver);
    return r;
}

BExpP instance_eq(const SymName& x, const Exp& rhs) {
    if (x.dtype == DType::Int) return bexp_cmp(RelOp::Eq, aexp_name(x), rhs.a);
    // boolean equality: both or neither
    return bexp_or(bexp_and(bexp_name(x), rhs.b),
                   bexp_not(bexp_or(bexp_name(x), rhs.b)));
}

bool abort_tagged(const SymLetter& m) {
    for (const auto& t : m.tags)
        if (t.kind == TagAtom::Kind::Ident && t.ident == "abort") return true;
    return false;
}

}  // namespace

PlayBuilder::PlayBuilder(const SymAutomaton& a) : aut_(&a), state_(a.initial) {
    play_.path.push_back(a.initial);
    // instances must not collide with free names of the model (e.g. symbolic
    // array lengths), so indices start above everything in the automaton
    int max_index = 0;
    std::vector<SymName> order;
    std::set<SymName> seen;
    for (const auto& t : a.trans) {
        for (const auto& at : t.guard.atoms) {
            collect_names_ordered(at.plain, order, seen);
            if (at.bind_rhs) collect_names_ordered(*at.bind_rhs, order, seen);
            collect_names_ordered(at.arr_index, order, seen);
            if (at.arr_value) collect_names_ordered(*at.arr_value, order, seen);
            seen.insert(at.bind_name);
            seen.insert(at.fun.name);
        }
        if (t.letter) {
            for (const auto& tag : t.letter->tags)
                collect_names_ordered(tag.cell_index, order, seen);
            if (t.letter->payload) {
                if (t.letter->payload->binder)
                    seen.insert(t.letter->payload->bname);
                else
                    collect_names_ordered(t.letter->payload->expr, order, seen);
            }
        }
    }
    for (const auto& n : seen) max_index = std::max(max_index, n.index);
    next_index_ = max_index + 1;
}

SymName PlayBuilder::fresh_instance(const SymName& base) {
    std::string hint = base.hint.empty() ? "X" + std::to_string(base.index) : base.hint;
    SymName inst{next_index_++, base.dtype, hint};
    play_.inputs.push_back(inst);
    instances_.emplace_back(base, inst);
    cur_[base] = exp_of_name(inst);
    return inst;
}

void PlayBuilder::step(const Transition& t) {
    if (t.src != state_) throw std::logic_error("play step from wrong state");
    for (const auto& at : t.guard.atoms) {
        switch (at.kind) {
            case GuardAtom::Kind::Plain: {
                BExpP c = fold(stamp(rewrite(at.plain, cur_), ver_));
                if (auto v = as_literal(c); !v || !*v) {
                    bool dup = false;
                    for (const auto& prev : play_.condition)
                        if (exp_equal(prev, c)) {
                            dup = true;
                            break;
                        }
                    if (!dup) play_.condition.push_back(c);
                }
                break;
            }
            case GuardAtom::Kind::Bind: {
                std::optional<Exp> rhs;
                if (at.bind_rhs) rhs = stamp(rewrite(*at.bind_rhs, cur_), ver_);
                SymName inst = fresh_instance(at.bind_name);
                if (rhs) play_.condition.push_back(fold(instance_eq(inst, *rhs)));
                break;
            }
            case GuardAtom::Kind::ArrInit: {
                Exp v = stamp(rewrite(*at.arr_value, cur_), ver_);
                auto it = std::find_if(play_.arrays.begin(), play_.arrays.end(),
                                       [&](const ArrayChain& c) { return c.fun == at.fun; });
                if (it == play_.arrays.end()) {
                    play_.arrays.push_back(ArrayChain{at.fun, {}});
                    it = std::prev(play_.arrays.end());
                }
                it->events.push_back(ArrayEvent{true, nullptr, v});
                ver_[at.fun.name] = static_cast<int>(it->events.size());
                break;
            }
            case GuardAtom::Kind::ArrUpdate: {
                AExpP ix = stamp(rewrite(at.arr_index, cur_), ver_);
                Exp v = stamp(rewrite(*at.arr_value, cur_), ver_);
                auto it = std::find_if(play_.arrays.begin(), play_.arrays.end(),
                                       [&](const ArrayChain& c) { return c.fun == at.fun; });
                if (it == play_.arrays.end())
                    throw std::logic_error("array update before initialization in play");
                it->events.push_back(ArrayEvent{false, ix, v});
                ver_[at.fun.name] = static_cast<int>(it->events.size());
                break;
            }
        }
    }
    if (t.letter) {
        SymLetter m = *t.letter;
        for (auto& tag : m.tags)
            if (tag.kind == TagAtom::Kind::Cell)
                tag.cell_index = stamp(rewrite(tag.cell_index, cur_), ver_);
        if (m.payload) {
            if (m.payload->binder) {
                SymName inst = fresh_instance(m.payload->bname);
                m.payload = Payload::of_exp(exp_of_name(inst));
            } else {
                m.payload = Payload::of_exp(stamp(rewrite(m.payload->expr, cur_), ver_));
            }
        }
        if (abort_tagged(m)) play_.aborting = true;
        play_.letters.push_back(std::move(m));
    }
    state_ = t.dst;
    play_.path.push_back(t.dst);
}

Play PlayBuilder::snapshot() const {
    Play p = play_;
    p.complete = aut_->finals.count(state_) > 0;
    // display names: unique bases keep the bare hint, repeats get 1, 2, ...
    std::map<int, std::vector<SymName>> by_base;  // base index -> instances
    std::map<int, std::string> base_hint;
    for (const auto& [base, inst] : instances_) {
        by_base[base.index].push_back(inst);
        base_hint[base.index] = inst.hint;  // hint chosen at creation
    }
    std::set<std::string> taken;
    {
        // reserve displays of the play's free (non-instance) names
        std::vector<SymName> order;
        std::set<SymName> seen;
        for (const auto& c : p.condition) collect_names_ordered(c, order, seen);
        for (const auto& m : p.letters) {
            for (const auto& tag : m.tags) collect_names_ordered(tag.cell_index, order, seen);
            if (m.payload) collect_names_ordered(m.payload->expr, order, seen);
        }
        std::set<int> inst_ix;
        for (const auto& i : p.inputs) inst_ix.insert(i.index);
        for (const auto& n : order)
            if (!inst_ix.count(n.index)) taken.insert(n.display());
    }
    std::map<int, std::string> hints;
    for (const auto& [bix, insts] : by_base) {
        const std::string& base = base_hint.at(bix);
        int counter = 0;
        for (const auto& inst : insts) {
            std::string cand;
            do {
                ++counter;
                cand = (counter == 1 && insts.size() == 1)
                           ? base
                           : base + std::to_string(counter);
            } while (taken.count(cand));
            taken.insert(cand);
            hints[inst.index] = cand;
        }
    }
    for (auto& c : p.condition) c = rename_hints(c, hints);
    for (auto& m : p.letters) {
        for (auto& tag : m.tags) tag.cell_index = rename_hints(tag.cell_index, hints);
        if (m.payload) m.payload->expr = rename_hints(m.payload->expr, hints);
    }
    for (auto& ch : p.arrays)
        for (auto& ev : ch.events) {
            ev.index = rename_hints(ev.index, hints);
            ev.value = rename_hints(ev.value, hints);
        }
    for (auto& i : p.inputs) i = rename_hints(i, hints);
    return p;
}

std::string Play::word_display() const {
    std::ostringstream os;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (i) os << " ";
        os << render(letters[i]);
    }
    return os.str();
}

std::string Play::condition_display() const {
    if (condition.empty()) return "tt";
    std::ostringstream os;
    for (size_t i = 0; i < condition.size(); ++i) {
        if (i) os << " && ";
        os << render(condition[i]);
    }
    return os.str();
}

std::vector<Play> enumerate_plays(const SymAutomaton& a, int max_len) {
    std::vector<Play> out;
    if (a.initial < 0 || a.nstates == 0) return out;
    for (const auto& g : a.accept_empty) {
        PlayBuilder b(a);
        b.step(Transition{a.initial, g, std::nullopt, a.initial});
        Play p = b.snapshot();
        p.complete = true;
        out.push_back(std::move(p));
    }
    // DFS; epsilon streaks may not revisit a state between letters
    struct Frame {
        PlayBuilder b;
        std::set<int> eps_seen;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{PlayBuilder(a), {a.initial}});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (a.finals.count(f.b.state())) out.push_back(f.b.snapshot());
        for (const auto& t : a.trans) {
            if (t.src != f.b.state()) continue;
            if (!t.letter) {
                if (f.eps_seen.count(t.dst)) continue;
                Frame g = f;
                g.b.step(t);
                g.eps_seen.insert(t.dst);
                stack.push_back(std::move(g));
            } else {
                if ((int)f.b.length() >= max_len) continue;
                Frame g = f;
                g.b.step(t);
                g.eps_seen = {t.dst};
                stack.push_back(std::move(g));
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Play& x, const Play& y) {
        if (x.letters.size() != y.letters.size())
            return x.letters.size() < y.letters.size();
        return x.word_display() < y.word_display();
    });
    return out;
}

std::string concretize(const Play& p, const Evaluation& rho) {
    std::ostringstream os;
    for (size_t i = 0; i < p.letters.size(); ++i) {
        SymLetter m = p.letters[i];
        for (auto& tag : m.tags)
            if (tag.kind == TagAtom::Kind::Cell)
                tag.cell_index = aexp_lit(evaluate(tag.cell_index, rho));
        if (m.payload) {
            const Exp& e = m.payload->expr;
            if (e.dtype == DType::Int)
                m.payload = Payload::of_exp(exp_of(aexp_lit(evaluate(e.a, rho))));
            else
                m.payload = Payload::of_exp(exp_of(bexp_lit(evaluate(e.b, rho))));
        }
        if (i) os << " ";
        os << render(m);
    }
    return os.str();
}

}  // namespace sgc
