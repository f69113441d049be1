#include "sgc/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sgc {

namespace {

std::string hint_of(const std::string& ident) {
    std::string h = ident;
    for (char& c : h) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return h;
}

/// Linear automaton accepting exactly the given word.
SymAutomaton word(std::vector<GuardedLetter> ls) {
    SymAutomaton a;
    a.nstates = static_cast<int>(ls.size()) + 1;
    a.finals.insert(a.nstates - 1);
    for (size_t i = 0; i < ls.size(); ++i)
        a.trans.push_back(Transition{static_cast<int>(i), std::move(ls[i].guard),
                                     std::move(ls[i].letter), static_cast<int>(i) + 1});
    return a;
}

BExpP exp_eq(const Exp& a, const Exp& b) {
    if (a.dtype == DType::Int && b.dtype == DType::Int) return bexp_cmp(RelOp::Eq, a.a, b.a);
    if (a.dtype == DType::Bool && b.dtype == DType::Bool)
        return bexp_or(bexp_and(a.b, b.b), bexp_not(bexp_or(a.b, b.b)));
    throw TranslateError("payload type mismatch");
}

Exp lit_exp(DType d, long long v) {
    return d == DType::Int ? exp_of(aexp_lit(v)) : exp_of(bexp_lit(v != 0));
}

bool scalar_cell_letter(const SymLetter& m, const std::string& x) {
    return m.tags.size() == 1 && m.tags[0].kind == TagAtom::Kind::Ident && m.tags[0].ident == x;
}

bool array_cell_letter(const SymLetter& m, const std::string& x) {
    return m.tags.size() == 1 && m.tags[0].kind == TagAtom::Kind::Cell && m.tags[0].ident == x;
}

std::string base_moves(const BaseType& b, const std::string& tag) {
    auto t = [&](const std::string& m) { return tag.empty() ? m : m + "^{" + tag + "}"; };
    std::string d;
    switch (b.kind) {
        case BaseType::Kind::Com: return t("run") + " (Q), " + t("done") + " (A)";
        case BaseType::Kind::Exp:
            d = b.data == DType::Int ? "int" : "bool";
            return t("q") + " (Q), " + t("val:" + d) + " (A)";
        case BaseType::Kind::Var:
            d = b.data == DType::Int ? "int" : "bool";
            return t("read") + " (Q), " + t("val:" + d) + " (A), " + t("write:" + d) + " (Q), " +
                   t("ok") + " (A)";
        case BaseType::Kind::Arr:
            d = b.data == DType::Int ? "int" : "bool";
            return t("read[a]") + " (Q), " + t("val:" + d) + " (A), " + t("write[a]:" + d) +
                   " (Q), " + t("ok[a]") + " (A)";
    }
    return "";
}

}  // namespace

std::string alphabet_of(const Type& ty) {
    std::ostringstream os;
    for (size_t i = 0; i < ty.args.size(); ++i)
        os << "arg " << (i + 1) << " (" << ty.args[i].display()
           << "): " << base_moves(ty.args[i], std::to_string(i + 1)) << "\n";
    os << "result (" << ty.ret.display() << "): " << base_moves(ty.ret, "") << "\n";
    return os.str();
}

SymAutomaton Translator::tidy(const SymAutomaton& a) const {
    SymAutomaton r = prune_unreachable(eliminate_epsilon(a));
    if (opts_.simplify) r = simplify(prune_unreachable(collapse_aliases(simplify(r))));
    return r;
}

SymAutomaton Translator::free_identifier(const std::string& x, const Type& type) {
    TagAtom tx = TagAtom::of_ident(x);
    // argument sub-languages R^{x,i}
    SymAutomaton center = aut_epsilon();
    if (!type.args.empty()) {
        SymAutomaton sum;
        for (size_t i = 0; i < type.args.size(); ++i) {
            const BaseType& b = type.args[i];
            std::vector<TagAtom> xi{tx, TagAtom::of_arg(static_cast<int>(i) + 1)};
            std::vector<TagAtom> ti{TagAtom::of_arg(static_cast<int>(i) + 1)};
            SymAutomaton r;
            switch (b.kind) {
                case BaseType::Kind::Exp: {
                    SymName z = pool_.fresh(b.data, "Z");
                    r = word({gl(mk_letter(MoveCtor::Q, xi)), gl(mk_letter(MoveCtor::Q, ti)),
                              gl(mk_letter_binder(MoveCtor::Val, z, ti)),
                              gl(mk_letter_exp(MoveCtor::Val, exp_of_name(z), xi))});
                    break;
                }
                case BaseType::Kind::Com:
                    r = word({gl(mk_letter(MoveCtor::Run, xi)), gl(mk_letter(MoveCtor::Run, ti)),
                              gl(mk_letter(MoveCtor::Done, ti)),
                              gl(mk_letter(MoveCtor::Done, xi))});
                    break;
                case BaseType::Kind::Var: {
                    SymName z = pool_.fresh(b.data, "Z");
                    SymName zp = pool_.fresh(b.data, "Z");
                    SymAutomaton rd =
                        word({gl(mk_letter(MoveCtor::Read, xi)), gl(mk_letter(MoveCtor::Read, ti)),
                              gl(mk_letter_binder(MoveCtor::Val, z, ti)),
                              gl(mk_letter_exp(MoveCtor::Val, exp_of_name(z), xi))});
                    SymAutomaton wr = word({gl(mk_letter_binder(MoveCtor::Write, zp, xi)),
                                            gl(mk_letter_exp(MoveCtor::Write, exp_of_name(zp), ti)),
                                            gl(mk_letter(MoveCtor::Ok, ti)),
                                            gl(mk_letter(MoveCtor::Ok, xi))});
                    r = alt(rd, wr);
                    break;
                }
                case BaseType::Kind::Arr:
                    throw TranslateError("array-typed function arguments are not supported");
            }
            sum = i == 0 ? r : alt(sum, r);
        }
        center = star(sum);
    }
    std::vector<TagAtom> tgx{tx};
    SymAutomaton out;
    switch (type.ret.kind) {
        case BaseType::Kind::Exp: {
            SymName v = pool_.fresh(type.ret.data, hint_of(x));
            out = concat(word({gl(mk_letter(MoveCtor::Q)), gl(mk_letter(MoveCtor::Q, tgx))}),
                         concat(center, word({gl(mk_letter_binder(MoveCtor::Val, v, tgx)),
                                              gl(mk_letter_exp(MoveCtor::Val, exp_of_name(v)))})));
            break;
        }
        case BaseType::Kind::Com:
            out = concat(word({gl(mk_letter(MoveCtor::Run)), gl(mk_letter(MoveCtor::Run, tgx))}),
                         concat(center, word({gl(mk_letter(MoveCtor::Done, tgx)),
                                              gl(mk_letter(MoveCtor::Done))})));
            break;
        case BaseType::Kind::Var: {
            SymName z = pool_.fresh(type.ret.data, hint_of(x));
            SymName zp = pool_.fresh(type.ret.data, hint_of(x));
            SymAutomaton rd =
                concat(word({gl(mk_letter(MoveCtor::Read)), gl(mk_letter(MoveCtor::Read, tgx))}),
                       concat(center, word({gl(mk_letter_binder(MoveCtor::Val, z, tgx)),
                                            gl(mk_letter_exp(MoveCtor::Val, exp_of_name(z)))})));
            SymAutomaton wr = concat(
                word({gl(mk_letter_binder(MoveCtor::Write, zp)),
                      gl(mk_letter_exp(MoveCtor::Write, exp_of_name(zp), tgx))}),
                concat(center,
                       word({gl(mk_letter(MoveCtor::Ok, tgx)), gl(mk_letter(MoveCtor::Ok))})));
            out = alt(rd, wr);
            break;
        }
        case BaseType::Kind::Arr:
            throw TranslateError("array identifier '" + x + "' must be indexed");
    }
    return tidy(out);
}

SymAutomaton Translator::interp(Context& ctx, const TermP& t) {
    auto arg = [](int i) { return TagAtom::of_arg(i); };
    switch (t->kind) {
        case Term::Kind::IntLit:
            return word({gl(mk_letter(MoveCtor::Q)),
                         gl(mk_letter_exp(MoveCtor::Val, exp_of(aexp_lit(t->ilit))))});
        case Term::Kind::BoolLit:
            return word({gl(mk_letter(MoveCtor::Q)),
                         gl(mk_letter_exp(MoveCtor::Val, exp_of(bexp_lit(t->blit))))});
        case Term::Kind::Skip:
            return word({gl(mk_letter(MoveCtor::Run)), gl(mk_letter(MoveCtor::Done))});
        case Term::Kind::Abort:
            return free_identifier("abort", Type{{}, BaseType{BaseType::Kind::Com}});
        case Term::Kind::Ident: {
            const Type* ty = ctx.lookup(t->ident);
            if (!ty) throw TranslateError("unbound identifier '" + t->ident + "'");
            return free_identifier(t->ident, *ty);
        }
        case Term::Kind::Lambda:
            throw TranslateError("lambda abstractions have no base-type model; "
                                 "apply the term or supply a first-order judgement");
        case Term::Kind::App: {
            // application spine f M1 ... Mk with f a free identifier
            std::vector<TermP> args;
            TermP head = t;
            while (head->kind == Term::Kind::App) {
                args.push_back(head->t2);
                head = head->t1;
            }
            std::reverse(args.begin(), args.end());
            if (head->kind == Term::Kind::Lambda)
                throw TranslateError("term is not beta-normal");
            if (head->kind != Term::Kind::Ident)
                throw TranslateError("application head must be an identifier");
            const Type* fty = ctx.lookup(head->ident);
            if (!fty) throw TranslateError("unbound identifier '" + head->ident + "'");
            SymAutomaton a = free_identifier(head->ident, *fty);
            for (size_t i = 0; i < args.size(); ++i) {
                TagAtom ti = arg(static_cast<int>(i) + 1);
                a = tidy(compose(a, rename(interp(ctx, args[i]), ti), ti));
            }
            // partial application: renumber the remaining argument tags
            if (args.size() < fty->args.size()) {
                int k = static_cast<int>(args.size());
                for (auto& tr : a.trans)
                    if (tr.letter && !tr.letter->tags.empty() &&
                        tr.letter->tags[0].kind == TagAtom::Kind::Arg)
                        tr.letter->tags[0].arg -= k;
            }
            return a;
        }
        case Term::Kind::Arith:
        case Term::Kind::Cmp:
        case Term::Kind::And:
        case Term::Kind::Or: {
            DType opd = t->kind == Term::Kind::And || t->kind == Term::Kind::Or ? DType::Bool
                                                                                : DType::Int;
            SymName z1 = pool_.fresh(opd, "Z");
            SymName z2 = pool_.fresh(opd, "Z");
            Exp out;
            switch (t->kind) {
                case Term::Kind::Arith:
                    out = exp_of(aexp_bin(t->aop, aexp_name(z1), aexp_name(z2)));
                    break;
                case Term::Kind::Cmp:
                    out = exp_of(bexp_cmp(t->rop, aexp_name(z1), aexp_name(z2)));
                    break;
                case Term::Kind::And:
                    out = exp_of(bexp_and(bexp_name(z1), bexp_name(z2)));
                    break;
                default: out = exp_of(bexp_or(bexp_name(z1), bexp_name(z2)));
            }
            SymAutomaton c = word({gl(mk_letter(MoveCtor::Q)), gl(mk_letter(MoveCtor::Q, {arg(1)})),
                                   gl(mk_letter_binder(MoveCtor::Val, z1, {arg(1)})),
                                   gl(mk_letter(MoveCtor::Q, {arg(2)})),
                                   gl(mk_letter_binder(MoveCtor::Val, z2, {arg(2)})),
                                   gl(mk_letter_exp(MoveCtor::Val, out))});
            return plug2(ctx, c, t->t1, t->t2);
        }
        case Term::Kind::Not: {
            SymName z = pool_.fresh(DType::Bool, "Z");
            SymAutomaton c =
                word({gl(mk_letter(MoveCtor::Q)), gl(mk_letter(MoveCtor::Q, {arg(1)})),
                      gl(mk_letter_binder(MoveCtor::Val, z, {arg(1)})),
                      gl(mk_letter_exp(MoveCtor::Val, exp_of(bexp_not(bexp_name(z)))))});
            return plug1(ctx, c, t->t1);
        }
        case Term::Kind::Seq: {
            SymAutomaton c =
                word({gl(mk_letter(MoveCtor::Run)), gl(mk_letter(MoveCtor::Run, {arg(1)})),
                      gl(mk_letter(MoveCtor::Done, {arg(1)})),
                      gl(mk_letter(MoveCtor::Run, {arg(2)})),
                      gl(mk_letter(MoveCtor::Done, {arg(2)})), gl(mk_letter(MoveCtor::Done))});
            return plug2(ctx, c, t->t1, t->t2);
        }
        case Term::Kind::Assign: {
            DType d = DType::Int;
            {
                Type vt = typecheck(ctx, t->t1);
                d = vt.ret.data;
            }
            SymName z = pool_.fresh(d, "Z");
            SymAutomaton c =
                word({gl(mk_letter(MoveCtor::Run)), gl(mk_letter(MoveCtor::Q, {arg(2)})),
                      gl(mk_letter_binder(MoveCtor::Val, z, {arg(2)})),
                      gl(mk_letter_exp(MoveCtor::Write, exp_of_name(z), {arg(1)})),
                      gl(mk_letter(MoveCtor::Ok, {arg(1)})), gl(mk_letter(MoveCtor::Done))});
            return plug2(ctx, c, t->t1, t->t2);
        }
        case Term::Kind::Deref: {
            DType d = DType::Int;
            {
                Type vt = typecheck(ctx, t->t1);
                d = vt.ret.data;
            }
            SymName z = pool_.fresh(d, "Z");
            SymAutomaton c =
                word({gl(mk_letter(MoveCtor::Q)), gl(mk_letter(MoveCtor::Read, {arg(1)})),
                      gl(mk_letter_binder(MoveCtor::Val, z, {arg(1)})),
                      gl(mk_letter_exp(MoveCtor::Val, exp_of_name(z)))});
            return plug1(ctx, c, t->t1);
        }
        case Term::Kind::If: {
            SymName z = pool_.fresh(DType::Bool, "Z");
            SymAutomaton prefix =
                word({gl(mk_letter(MoveCtor::Run)), gl(mk_letter(MoveCtor::Q, {arg(1)})),
                      gl(mk_letter_binder(MoveCtor::Val, z, {arg(1)}))});
            SymAutomaton thenb =
                word({gl(Guard::of(bexp_name(z)), mk_letter(MoveCtor::Run, {arg(2)})),
                      gl(mk_letter(MoveCtor::Done, {arg(2)}))});
            SymAutomaton elseb =
                word({gl(Guard::of(bexp_not(bexp_name(z))), mk_letter(MoveCtor::Run, {arg(3)})),
                      gl(mk_letter(MoveCtor::Done, {arg(3)}))});
            SymAutomaton c =
                concat(prefix, concat(alt(thenb, elseb), word({gl(mk_letter(MoveCtor::Done))})));
            c = tidy(c);
            std::vector<TermP> subs{t->t1, t->t2, t->t3};
            SymAutomaton a = c;
            for (int i = 0; i < 3; ++i) {
                TagAtom ti = arg(i + 1);
                a = tidy(compose(a, rename(interp(ctx, subs[i]), ti), ti));
            }
            return a;
        }
        case Term::Kind::While: {
            SymName z = pool_.fresh(DType::Bool, "Z");
            GuardedLetter ask = gl(mk_letter(MoveCtor::Q, {arg(1)}));
            GuardedLetter get = gl(mk_letter_binder(MoveCtor::Val, z, {arg(1)}));
            SymAutomaton body =
                word({gl(Guard::of(bexp_name(z)), mk_letter(MoveCtor::Run, {arg(2)})),
                      gl(mk_letter(MoveCtor::Done, {arg(2)})), ask, get});
            SymAutomaton c =
                concat(word({gl(mk_letter(MoveCtor::Run)), ask, get}),
                       concat(star(body), word({gl(Guard::of(bexp_not(bexp_name(z))),
                                                   mk_letter(MoveCtor::Done))})));
            c = tidy(c);
            return plug2(ctx, c, t->t1, t->t2);
        }
        case Term::Kind::NewVar: {
            BaseType b;
            if (t->is_array) {
                if (t->data != DType::Int)
                    throw TranslateError("only integer arrays are supported");
                b = BaseType{BaseType::Kind::Arr, t->data, false, t->arr_len};
            } else {
                b = BaseType{BaseType::Kind::Var, t->data};
            }
            ctx.entries.push_back({t->ident, Type{{}, b}});
            SymAutomaton body = interp(ctx, t->t1);
            ctx.entries.pop_back();
            return t->is_array ? array_new_elimination(body, t->ident, t->init)
                               : new_elimination(body, t->ident, t->data, t->init);
        }
        case Term::Kind::Index: {
            if (t->t1->kind != Term::Kind::Ident)
                throw TranslateError("array indexing requires an array identifier");
            const Type* ty = ctx.lookup(t->t1->ident);
            if (!ty || !ty->is_base() || ty->ret.kind != BaseType::Kind::Arr)
                throw TranslateError("'" + t->t1->ident + "' is not an array");
            return array_element(ctx, t->t1->ident, ty->ret, t->t2);
        }
        case Term::Kind::Length: {
            if (t->t1->kind != Term::Kind::Ident)
                throw TranslateError("lengthof requires an array identifier");
            const Type* ty = ctx.lookup(t->t1->ident);
            if (!ty || !ty->is_base() || ty->ret.kind != BaseType::Kind::Arr)
                throw TranslateError("'" + t->t1->ident + "' is not an array");
            Exp k;
            if (ty->ret.sym_len) {
                auto it = array_lengths_.find(t->t1->ident);
                if (it == array_lengths_.end())
                    it = array_lengths_.emplace(t->t1->ident, pool_.fresh(DType::Int, "k")).first;
                k = exp_of(aexp_name(it->second));
            } else {
                k = exp_of(aexp_lit(ty->ret.len));
            }
            return word({gl(mk_letter(MoveCtor::Q)), gl(mk_letter_exp(MoveCtor::Val, k))});
        }
    }
    throw TranslateError("malformed term");
}

SymAutomaton Translator::plug1(Context& ctx, const SymAutomaton& c, const TermP& m1) {
    TagAtom t1 = TagAtom::of_arg(1);
    return tidy(compose(c, rename(interp(ctx, m1), t1), t1));
}

SymAutomaton Translator::plug2(Context& ctx, const SymAutomaton& c, const TermP& m1,
                               const TermP& m2) {
    TagAtom t1 = TagAtom::of_arg(1), t2 = TagAtom::of_arg(2);
    SymAutomaton a = tidy(compose(tidy(c), rename(interp(ctx, m1), t1), t1));
    return tidy(compose(a, rename(interp(ctx, m2), t2), t2));
}

SymAutomaton Translator::array_element(Context& ctx, const std::string& x, const BaseType& arr,
                                       const TermP& index) {
    if (arr.data != DType::Int) throw TranslateError("only integer arrays are supported");
    Exp k;
    if (arr.sym_len) {
        auto it = array_lengths_.find(x);
        if (it == array_lengths_.end())
            it = array_lengths_.emplace(x, pool_.fresh(DType::Int, "k")).first;
        k = exp_of(aexp_name(it->second));
    } else {
        k = exp_of(aexp_lit(arr.len));
    }
    TagAtom a1 = TagAtom::of_arg(1);
    SymName z = pool_.fresh(DType::Int, "Z");
    std::vector<TagAtom> cell{TagAtom::of_cell(x, aexp_name(z))};
    std::vector<TagAtom> ab{TagAtom::of_ident("abort")};
    Guard in_b = Guard::of(bexp_cmp(RelOp::Lt, aexp_name(z), k.a));
    Guard out_b = Guard::of(bexp_cmp(RelOp::Ge, aexp_name(z), k.a));

    SymName zr = pool_.fresh(DType::Int, "Z");
    SymAutomaton rd_in = word({gl(in_b, mk_letter(MoveCtor::Read, cell)),
                               gl(mk_letter_binder(MoveCtor::Val, zr, cell)),
                               gl(mk_letter_exp(MoveCtor::Val, exp_of_name(zr)))});
    SymAutomaton rd_tail = rd_in;
    if (opts_.bounds_check) {
        SymAutomaton oob = word({gl(out_b, mk_letter(MoveCtor::Run, ab)),
                                 gl(mk_letter(MoveCtor::Done, ab)),
                                 gl(mk_letter_exp(MoveCtor::Val, exp_of(aexp_lit(0))))});
        rd_tail = alt(rd_in, oob);
    }
    SymAutomaton rd =
        concat(word({gl(mk_letter(MoveCtor::Read)), gl(mk_letter(MoveCtor::Q, {a1})),
                     gl(mk_letter_binder(MoveCtor::Val, z, {a1}))}),
               rd_tail);

    SymName w = pool_.fresh(DType::Int, "Z");
    SymAutomaton wr_in = word({gl(in_b, mk_letter_exp(MoveCtor::Write, exp_of_name(w), cell)),
                               gl(mk_letter(MoveCtor::Ok, cell)), gl(mk_letter(MoveCtor::Ok))});
    SymAutomaton wr_tail = wr_in;
    if (opts_.bounds_check) {
        SymAutomaton oob =
            word({gl(out_b, mk_letter(MoveCtor::Run, ab)), gl(mk_letter(MoveCtor::Done, ab)),
                  gl(mk_letter(MoveCtor::Ok))});
        wr_tail = alt(wr_in, oob);
    }
    SymAutomaton wr =
        concat(word({gl(mk_letter_binder(MoveCtor::Write, w)), gl(mk_letter(MoveCtor::Q, {a1})),
                     gl(mk_letter_binder(MoveCtor::Val, z, {a1}))}),
               wr_tail);

    SymAutomaton c = tidy(alt(rd, wr));
    return tidy(compose(c, rename(interp(ctx, index), a1), a1));
}

SymAutomaton Translator::new_elimination(const SymAutomaton& aM, const std::string& x, DType d,
                                         long long init) {
    SymName tracker = pool_.fresh(d, hint_of(x));
    SymAutomaton e;
    e.nstates = aM.nstates;
    e.initial = aM.initial;
    e.finals = aM.finals;
    std::vector<std::vector<const Transition*>> out(aM.nstates);
    for (const auto& tr : aM.trans) out[tr.src].push_back(&tr);
    std::set<const Transition*> consumed;
    for (const auto& tr : aM.trans) {
        bool is_cell = tr.letter && scalar_cell_letter(*tr.letter, x);
        if (!is_cell) {
            Transition nt = tr;
            if (tr.src == aM.initial)
                nt.guard.atoms.insert(nt.guard.atoms.begin(),
                                      GuardAtom::of_bind(tracker, lit_exp(d, init)));
            e.trans.push_back(std::move(nt));
            continue;
        }
        const SymLetter& m = *tr.letter;
        if (!m.question()) continue;  // answers are consumed by their question
        if (m.ctor == MoveCtor::Write) {
            for (const Transition* t2 : out[tr.dst]) {
                if (!t2->letter || !scalar_cell_letter(*t2->letter, x) ||
                    t2->letter->ctor != MoveCtor::Ok)
                    throw TranslateError("malformed cell protocol: write^" + x +
                                         " not followed by ok^" + x);
                consumed.insert(t2);
                Guard g = tr.guard;
                if (m.payload->binder) {
                    g.atoms.push_back(GuardAtom::of_bind(m.payload->bname, std::nullopt));
                    g.atoms.push_back(
                        GuardAtom::of_bind(tracker, exp_of_name(m.payload->bname)));
                } else {
                    g.atoms.push_back(GuardAtom::of_bind(tracker, m.payload->expr));
                }
                g = g.then(t2->guard);
                e.trans.push_back(Transition{tr.src, std::move(g), std::nullopt, t2->dst});
            }
        } else if (m.ctor == MoveCtor::Read) {
            for (const Transition* t2 : out[tr.dst]) {
                if (!t2->letter || !scalar_cell_letter(*t2->letter, x) ||
                    t2->letter->ctor != MoveCtor::Val)
                    throw TranslateError("malformed cell protocol: read^" + x +
                                         " not followed by a value answer");
                consumed.insert(t2);
                Guard g = tr.guard.then(t2->guard);
                const Payload& p = *t2->letter->payload;
                if (p.binder)
                    g.atoms.push_back(GuardAtom::of_bind(p.bname, exp_of_name(tracker)));
                else
                    g.atoms.push_back(
                        GuardAtom::of_plain(exp_eq(p.expr, exp_of_name(tracker))));
                e.trans.push_back(Transition{tr.src, std::move(g), std::nullopt, t2->dst});
            }
        } else {
            throw TranslateError("unexpected cell question on '" + x + "'");
        }
    }
    for (const auto& tr : aM.trans)
        if (tr.letter && scalar_cell_letter(*tr.letter, x) && !tr.letter->question() &&
            !consumed.count(&tr)) {
            // answer whose question state is shared with non-cell moves
            throw TranslateError("malformed cell protocol: dangling answer on '" + x + "'");
        }
    return tidy(e);
}

SymAutomaton Translator::array_new_elimination(const SymAutomaton& aM, const std::string& x,
                                               long long init) {
    FunSym tracker{pool_.fresh(DType::Int, hint_of(x))};
    SymAutomaton e;
    e.nstates = aM.nstates;
    e.initial = aM.initial;
    e.finals = aM.finals;
    std::vector<std::vector<const Transition*>> out(aM.nstates);
    for (const auto& tr : aM.trans) out[tr.src].push_back(&tr);
    std::set<const Transition*> consumed;
    for (const auto& tr : aM.trans) {
        bool is_cell = tr.letter && array_cell_letter(*tr.letter, x);
        if (!is_cell) {
            Transition nt = tr;
            if (tr.src == aM.initial)
                nt.guard.atoms.insert(
                    nt.guard.atoms.begin(),
                    GuardAtom::of_arr_init(tracker, exp_of(aexp_lit(init))));
            e.trans.push_back(std::move(nt));
            continue;
        }
        const SymLetter& m = *tr.letter;
        if (!m.question()) continue;
        AExpP idx = m.tags[0].cell_index;
        if (m.ctor == MoveCtor::Write) {
            for (const Transition* t2 : out[tr.dst]) {
                if (!t2->letter || !array_cell_letter(*t2->letter, x) ||
                    t2->letter->ctor != MoveCtor::Ok)
                    throw TranslateError("malformed array protocol: write not followed by ok");
                consumed.insert(t2);
                Guard g = tr.guard;
                if (m.payload->binder) {
                    g.atoms.push_back(GuardAtom::of_bind(m.payload->bname, std::nullopt));
                    g.atoms.push_back(GuardAtom::of_arr_update(
                        tracker, idx, exp_of_name(m.payload->bname)));
                } else {
                    g.atoms.push_back(GuardAtom::of_arr_update(tracker, idx, m.payload->expr));
                }
                g = g.then(t2->guard);
                e.trans.push_back(Transition{tr.src, std::move(g), std::nullopt, t2->dst});
            }
        } else if (m.ctor == MoveCtor::Read) {
            for (const Transition* t2 : out[tr.dst]) {
                if (!t2->letter || !array_cell_letter(*t2->letter, x) ||
                    t2->letter->ctor != MoveCtor::Val)
                    throw TranslateError("malformed array protocol: read not followed by value");
                consumed.insert(t2);
                Guard g = tr.guard.then(t2->guard);
                Exp lookup = exp_of(aexp_funapp(tracker, idx));
                const Payload& p = *t2->letter->payload;
                if (p.binder)
                    g.atoms.push_back(GuardAtom::of_bind(p.bname, lookup));
                else
                    g.atoms.push_back(GuardAtom::of_plain(exp_eq(p.expr, lookup)));
                e.trans.push_back(Transition{tr.src, std::move(g), std::nullopt, t2->dst});
            }
        } else {
            throw TranslateError("unexpected array-cell question on '" + x + "'");
        }
    }
    for (const auto& tr : aM.trans)
        if (tr.letter && array_cell_letter(*tr.letter, x) && !tr.letter->question() &&
            !consumed.count(&tr))
            throw TranslateError("malformed array protocol: dangling answer on '" + x + "'");
    return tidy(e);
}

SymAutomaton Translator::new_via_cell(const SymAutomaton& aM, const std::string& x, DType d,
                                      long long init) {
    TagAtom tx = TagAtom::of_ident(x);
    std::vector<TagAtom> tgx{tx};
    SymName z = pool_.fresh(d, "Z");
    // cell strategy: (read.v)* (write(?Z).ok.(read.Z)*)*
    SymAutomaton initial_reads =
        star(word({gl(mk_letter(MoveCtor::Read, tgx)),
                   gl(mk_letter_exp(MoveCtor::Val, lit_exp(d, init), tgx))}));
    SymAutomaton epoch = concat(
        word({gl(mk_letter_binder(MoveCtor::Write, z, tgx)), gl(mk_letter(MoveCtor::Ok, tgx))}),
        star(word({gl(mk_letter(MoveCtor::Read, tgx)),
                   gl(mk_letter_exp(MoveCtor::Val, exp_of_name(z), tgx))})));
    SymAutomaton cell = tidy(concat(initial_reads, star(epoch)));
    // ambient: self-loops over the non-x letters occurring in aM
    SymAutomaton ambient;
    ambient.nstates = 1;
    ambient.finals.insert(0);
    std::set<std::string> seen;
    for (const auto& tr : aM.trans) {
        if (!tr.letter || scalar_cell_letter(*tr.letter, x)) continue;
        if (seen.insert(render(*tr.letter)).second)
            ambient.trans.push_back(Transition{0, Guard::tt(), tr.letter, 0});
    }
    SymAutomaton constrained = intersect(aM, shuffle(cell, ambient));
    SymAutomaton res = restrict(constrained, [x](const SymLetter& m) {
        return scalar_cell_letter(m, x);
    });
    return tidy(res);
}

namespace {

// ---- display-hint polishing -------------------------------------------
// Intermediate construction allocates many names that simplification later
// removes, leaving deduplication suffixes on the survivors (e.g. a lone
// "X9"). Renumber hints among the names that actually appear in the final
// model: a base hint with a single survivor gets the bare base back.

void polish_hints(SymAutomaton& a, std::map<std::string, SymName>& array_lengths) {
    std::vector<SymName> order;
    std::set<SymName> seen;
    for (const auto& t : a.trans) {
        for (const auto& at : t.guard.atoms) {
            collect_names_ordered(at.plain, order, seen);
            if (at.bind_rhs) collect_names_ordered(*at.bind_rhs, order, seen);
            collect_names_ordered(at.arr_index, order, seen);
            if (at.arr_value) collect_names_ordered(*at.arr_value, order, seen);
            if (at.kind == GuardAtom::Kind::Bind && seen.insert(at.bind_name).second)
                order.push_back(at.bind_name);
            if ((at.kind == GuardAtom::Kind::ArrInit ||
                 at.kind == GuardAtom::Kind::ArrUpdate) &&
                seen.insert(at.fun.name).second)
                order.push_back(at.fun.name);
        }
        if (t.letter) {
            for (const auto& tag : t.letter->tags) collect_names_ordered(tag.cell_index, order, seen);
            if (t.letter->payload) {
                if (t.letter->payload->binder) {
                    if (seen.insert(t.letter->payload->bname).second)
                        order.push_back(t.letter->payload->bname);
                } else {
                    collect_names_ordered(t.letter->payload->expr, order, seen);
                }
            }
        }
    }
    // hintless names render as X<index>; keep those displays reserved
    std::set<std::string> taken;
    for (const auto& n : order)
        if (n.hint.empty()) taken.insert(n.display());
    // group survivors by base hint, in order of first appearance
    std::vector<std::pair<std::string, std::vector<SymName>>> groups;
    for (const auto& n : order) {
        if (n.hint.empty()) continue;
        std::string base = n.hint;
        while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back())))
            base.pop_back();
        if (base.empty()) base = n.hint;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == base; });
        if (it == groups.end())
            groups.push_back({base, {n}});
        else
            it->second.push_back(n);
    }
    std::map<int, std::string> hints;
    for (const auto& [base, names] : groups) {
        int counter = 0;
        for (const auto& n : names) {
            std::string cand;
            do {
                ++counter;
                cand = counter == 1 ? base : base + std::to_string(counter);
            } while (taken.count(cand));
            taken.insert(cand);
            hints[n.index] = cand;
        }
    }
    for (auto& t : a.trans) {
        for (auto& at : t.guard.atoms) {
            at.plain = rename_hints(at.plain, hints);
            at.bind_name = rename_hints(at.bind_name, hints);
            if (at.bind_rhs) at.bind_rhs = rename_hints(*at.bind_rhs, hints);
            at.fun.name = rename_hints(at.fun.name, hints);
            at.arr_index = rename_hints(at.arr_index, hints);
            if (at.arr_value) at.arr_value = rename_hints(*at.arr_value, hints);
        }
        if (t.letter) {
            for (auto& tag : t.letter->tags) tag.cell_index = rename_hints(tag.cell_index, hints);
            if (t.letter->payload) {
                if (t.letter->payload->binder)
                    t.letter->payload->bname = rename_hints(t.letter->payload->bname, hints);
                else
                    t.letter->payload->expr = rename_hints(t.letter->payload->expr, hints);
            }
        }
    }
    for (auto& g : a.accept_empty)
        for (auto& at : g.atoms) {
            at.plain = rename_hints(at.plain, hints);
            at.bind_name = rename_hints(at.bind_name, hints);
            if (at.bind_rhs) at.bind_rhs = rename_hints(*at.bind_rhs, hints);
        }
    for (auto& [x, k] : array_lengths) {
        (void)x;
        k = rename_hints(k, hints);
    }
}

}  // namespace

Strategy Translator::interpret(const Context& ctx, const TermP& t) {
    Type ty = typecheck(ctx, t);  // throws on ill-typed input
    array_lengths_.clear();
    pool_ = NamePool{};
    Context work = ctx;
    SymAutomaton a = interp(work, t);
    // unconstrained array lengths are positive
    for (const auto& [name, k] : array_lengths_) {
        (void)name;
        for (auto& tr : a.trans)
            if (tr.src == a.initial)
                tr.guard.atoms.push_back(GuardAtom::of_plain(
                    bexp_cmp(RelOp::Gt, aexp_name(k), aexp_lit(0))));
    }
    if (opts_.simplify) a = simplify(a);
    a = normalize(a);
    std::map<std::string, SymName> lengths = array_lengths_;
    if (opts_.simplify) polish_hints(a, lengths);
    return Strategy{std::move(a), ctx, std::move(ty), std::move(lengths)};
}

}  // namespace sgc
