#include "sgc/oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "sgc/plays.hpp"
#include "sgc/solver.hpp"

namespace sgc {

// ---------------------------------------------------------------------------
// gamma: instantiate symbolic plays over int_n
// ---------------------------------------------------------------------------

namespace {

bool value_in_n(const Value& v, int n) {
    return v.dtype == DType::Bool || (v.i >= 0 && v.i < n);
}

std::vector<Value> domain_of(DType d, int n) {
    std::vector<Value> vs;
    if (d == DType::Bool) {
        vs.push_back(Value::of_bool(false));
        vs.push_back(Value::of_bool(true));
    } else {
        for (int v = 0; v < n; ++v) vs.push_back(Value::of_int(v));
    }
    return vs;
}

}  // namespace

std::set<std::string> gamma(const Strategy& s, int n, int max_len) {
    std::set<std::string> out;
    for (const auto& p : enumerate_plays(s.aut, max_len)) {
        if (!p.complete) continue;
        Constraint c = constraint_of(p);
        // evaluations range over every scalar name of the condition except
        // the derived read results
        std::set<SymName> results;
        for (const auto& r : c.reads) results.insert(r.result);
        std::vector<SymName> names;
        {
            std::vector<SymName> order;
            std::set<SymName> seen;
            for (const auto& i : p.inputs)
                if (seen.insert(i).second) order.push_back(i);
            for (const auto& b : c.conjuncts) collect_names_ordered(b, order, seen);
            for (const auto& r : c.reads) collect_names_ordered(r.index, order, seen);
            for (const auto& ch : c.arrays)
                for (const auto& ev : ch.events) {
                    collect_names_ordered(ev.index, order, seen);
                    collect_names_ordered(ev.value, order, seen);
                }
            for (const auto& nm : order)
                if (!results.count(nm)) names.push_back(nm);
        }
        // schedule each conjunct at the first depth where all its names are
        // assigned; conjuncts over derived read results are left to the final
        // validate_model check
        std::map<SymName, size_t> pos;
        for (size_t i = 0; i < names.size(); ++i) pos[names[i]] = i;
        std::vector<std::vector<BExpP>> at(names.size() + 1);
        for (const auto& b : c.conjuncts) {
            std::vector<SymName> used;
            std::set<SymName> seen;
            collect_names_ordered(b, used, seen);
            size_t depth = 0;
            bool derived = false;
            for (const auto& nm : used) {
                auto it = pos.find(nm);
                if (it == pos.end()) { derived = true; break; }
                depth = std::max(depth, it->second + 1);
            }
            if (!derived) at[depth].push_back(b);
        }
        std::vector<std::vector<Value>> menu;
        for (const auto& nm : names) menu.push_back(domain_of(nm.dtype, n));
        Evaluation rho;
        auto holds = [&](const std::vector<BExpP>& bs) {
            try {
                for (const auto& b : bs)
                    if (!evaluate(b, rho)) return false;
            } catch (const EvalError&) {
                return false;
            }
            return true;
        };
        auto emit = [&]() {
            if (validate_model(c, rho)) {
                Evaluation full = with_derived_arrays(c, rho);
                bool ok = true;
                std::string word;
                try {
                    for (size_t i = 0; i < p.letters.size() && ok; ++i) {
                        SymLetter m = p.letters[i];
                        for (auto& tag : m.tags)
                            if (tag.kind == TagAtom::Kind::Cell)
                                tag.cell_index = aexp_lit(evaluate(tag.cell_index, full));
                        if (m.payload) {
                            Value v = m.payload->expr.dtype == DType::Int
                                          ? Value::of_int(evaluate(m.payload->expr.a, full))
                                          : Value::of_bool(evaluate(m.payload->expr.b, full));
                            if (!value_in_n(v, n)) ok = false;
                            m.payload = Payload::of_exp(
                                v.dtype == DType::Int ? exp_of(aexp_lit(v.i))
                                                      : exp_of(bexp_lit(v.b)));
                        }
                        if (ok) {
                            if (i) word += " ";
                            word += render(m);
                        }
                    }
                } catch (const EvalError&) {
                    ok = false;
                }
                if (ok) out.insert(word);
            }
        };
        // backtracking over the names in appearance order, pruning an
        // assignment as soon as a scheduled conjunct fails under it
        if (!holds(at[0])) continue;
        if (names.empty()) {
            emit();
            continue;
        }
        std::vector<size_t> pick(names.size(), 0);
        size_t d = 0;
        while (true) {
            if (pick[d] == menu[d].size()) {
                if (d == 0) break;
                --d;
                rho.names.erase(names[d]);
                ++pick[d];
                continue;
            }
            rho.names[names[d]] = menu[d][pick[d]];
            if (!holds(at[d + 1])) {
                rho.names.erase(names[d]);
                ++pick[d];
                continue;
            }
            if (d + 1 == names.size()) {
                emit();
                rho.names.erase(names[d]);
                ++pick[d];
                continue;
            }
            ++d;
            pick[d] = 0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// interpret_concrete: an independent nondeterministic interpreter
// ---------------------------------------------------------------------------

namespace {

struct St {
    std::map<std::string, Value> cells;
    std::map<std::string, std::vector<Value>> arrays;
};

struct Out {
    St st;
    std::vector<std::string> tr;
    long long fuel = 0;
    Value val;
};

std::string m_plain(MoveCtor c, std::vector<TagAtom> tags = {}) {
    return render(mk_letter(c, std::move(tags)));
}

Exp lit_of(const Value& v) {
    return v.dtype == DType::Int ? exp_of(aexp_lit(v.i)) : exp_of(bexp_lit(v.b));
}

std::string m_val(const Value& v, std::vector<TagAtom> tags = {}) {
    return render(mk_letter_exp(MoveCtor::Val, lit_of(v), std::move(tags)));
}

std::string m_write(const Value& v, std::vector<TagAtom> tags = {}) {
    return render(mk_letter_exp(MoveCtor::Write, lit_of(v), std::move(tags)));
}

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Interp {
  public:
    Interp(const Context& ctx, int n, size_t max_moves)
        : ctx_(ctx), n_(n), max_moves_(max_moves) {}

    std::vector<Out> ev(const TermP& t, St st, std::vector<std::string> tr, long long fuel);
    std::vector<Out> deref_of(const TermP& t, St st, std::vector<std::string> tr,
                              long long fuel);
    std::vector<Out> assign_to(const TermP& t, const Value& v, St st,
                               std::vector<std::string> tr, long long fuel);

    bool in_n(const Value& v) const { return value_in_n(v, n_); }
    std::vector<Value> domain(DType d) const { return domain_of(d, n_); }

  private:
    bool cut(const std::vector<std::string>& tr, long long fuel) const {
        return fuel <= 0 || tr.size() > max_moves_;
    }
    bool is_local(const St& st, const std::string& x) const {
        return st.cells.count(x) || st.arrays.count(x);
    }
    const Type& free_type(const std::string& x) const {
        const Type* ty = ctx_.lookup(x);
        if (!ty) throw OracleError("unbound identifier " + x);
        return *ty;
    }
    // environment behaviours after f's question: any sequence of completed
    // argument calls
    void calls(const std::string& f, const std::vector<BaseType>& tys,
               const std::vector<TermP>& args, St st, std::vector<std::string> tr,
               long long fuel, std::vector<Out>& acc);
    std::vector<Out> app(const TermP& t, St st, std::vector<std::string> tr, long long fuel,
                         int mode /*0=ev, 1=deref, 2=assign*/, const Value& wr);

    const Context& ctx_;
    int n_;
    size_t max_moves_;
};

void Interp::calls(const std::string& f, const std::vector<BaseType>& tys,
                   const std::vector<TermP>& args, St st, std::vector<std::string> tr,
                   long long fuel, std::vector<Out>& acc) {
    acc.push_back(Out{st, tr, fuel, Value::of_int(0)});
    if (cut(tr, fuel)) return;
    for (size_t i = 0; i < tys.size(); ++i) {
        std::vector<TagAtom> ti{TagAtom::of_ident(f), TagAtom::of_arg((int)i + 1)};
        switch (tys[i].kind) {
            case BaseType::Kind::Com: {
                auto tr2 = tr;
                tr2.push_back(m_plain(MoveCtor::Run, ti));
                for (auto& o : ev(args[i], st, tr2, fuel - 1)) {
                    o.tr.push_back(m_plain(MoveCtor::Done, ti));
                    calls(f, tys, args, o.st, o.tr, o.fuel, acc);
                }
                break;
            }
            case BaseType::Kind::Exp: {
                auto tr2 = tr;
                tr2.push_back(m_plain(MoveCtor::Q, ti));
                for (auto& o : ev(args[i], st, tr2, fuel - 1)) {
                    if (!in_n(o.val)) continue;
                    o.tr.push_back(m_val(o.val, ti));
                    calls(f, tys, args, o.st, o.tr, o.fuel, acc);
                }
                break;
            }
            case BaseType::Kind::Var: {
                {
                    auto tr2 = tr;
                    tr2.push_back(m_plain(MoveCtor::Read, ti));
                    for (auto& o : deref_of(args[i], st, tr2, fuel - 1)) {
                        if (!in_n(o.val)) continue;
                        o.tr.push_back(m_val(o.val, ti));
                        calls(f, tys, args, o.st, o.tr, o.fuel, acc);
                    }
                }
                for (const auto& w : domain(tys[i].data)) {
                    auto tr2 = tr;
                    tr2.push_back(m_write(w, ti));
                    for (auto& o : assign_to(args[i], w, st, tr2, fuel - 1)) {
                        o.tr.push_back(m_plain(MoveCtor::Ok, ti));
                        calls(f, tys, args, o.st, o.tr, o.fuel, acc);
                    }
                }
                break;
            }
            case BaseType::Kind::Arr:
                throw OracleError("array-typed function arguments are not supported");
        }
    }
}

std::vector<Out> Interp::app(const TermP& t, St st, std::vector<std::string> tr,
                             long long fuel, int mode, const Value& wr) {
    // spine: head identifier and arguments
    std::vector<TermP> args;
    TermP h = t;
    while (h->kind == Term::Kind::App) {
        args.insert(args.begin(), h->t2);
        h = h->t1;
    }
    if (h->kind != Term::Kind::Ident) throw OracleError("application head is not free");
    const Type& ty = free_type(h->ident);
    if (ty.args.size() != args.size()) throw OracleError("partial application");
    std::vector<TagAtom> tf{TagAtom::of_ident(h->ident)};
    std::vector<Out> mids, outs;
    switch (mode) {
        case 0:
            tr.push_back(m_plain(ty.ret.kind == BaseType::Kind::Com ? MoveCtor::Run
                                                                    : MoveCtor::Q,
                                 tf));
            break;
        case 1: tr.push_back(m_plain(MoveCtor::Read, tf)); break;
        case 2: tr.push_back(m_write(wr, tf)); break;
    }
    calls(h->ident, ty.args, args, std::move(st), std::move(tr), fuel, mids);
    for (auto& o : mids) {
        if (cut(o.tr, o.fuel)) continue;
        if (mode == 2) {
            o.tr.push_back(m_plain(MoveCtor::Ok, tf));
            outs.push_back(std::move(o));
        } else if (mode == 0 && ty.ret.kind == BaseType::Kind::Com) {
            o.tr.push_back(m_plain(MoveCtor::Done, tf));
            outs.push_back(std::move(o));
        } else {
            // expression / read answers: any value the environment may give
            for (const auto& v : domain(ty.ret.data)) {
                Out o2 = o;
                o2.tr.push_back(m_val(v, tf));
                o2.val = v;
                outs.push_back(std::move(o2));
            }
        }
    }
    return outs;
}

std::vector<Out> Interp::ev(const TermP& t, St st, std::vector<std::string> tr,
                            long long fuel) {
    if (cut(tr, fuel)) return {};
    --fuel;
    switch (t->kind) {
        case Term::Kind::IntLit: return {Out{st, tr, fuel, Value::of_int(t->ilit)}};
        case Term::Kind::BoolLit: return {Out{st, tr, fuel, Value::of_bool(t->blit)}};
        case Term::Kind::Skip: return {Out{st, tr, fuel, Value::of_int(0)}};
        case Term::Kind::Abort: {
            tr.push_back(m_plain(MoveCtor::Run, {TagAtom::of_ident("abort")}));
            tr.push_back(m_plain(MoveCtor::Done, {TagAtom::of_ident("abort")}));
            return {Out{st, tr, fuel, Value::of_int(0)}};
        }
        case Term::Kind::Ident: {
            const std::string& x = t->ident;
            if (is_local(st, x)) throw OracleError("variable used as a base value");
            const Type& ty = free_type(x);
            if (!ty.is_base()) throw OracleError("function identifier outside application");
            std::vector<TagAtom> tx{TagAtom::of_ident(x)};
            if (ty.ret.kind == BaseType::Kind::Com) {
                tr.push_back(m_plain(MoveCtor::Run, tx));
                tr.push_back(m_plain(MoveCtor::Done, tx));
                return {Out{st, tr, fuel, Value::of_int(0)}};
            }
            if (ty.ret.kind == BaseType::Kind::Exp) {
                tr.push_back(m_plain(MoveCtor::Q, tx));
                std::vector<Out> outs;
                for (const auto& v : domain(ty.ret.data)) {
                    Out o{st, tr, fuel, v};
                    o.tr.push_back(m_val(v, tx));
                    outs.push_back(std::move(o));
                }
                return outs;
            }
            throw OracleError("variable used as a base value");
        }
        case Term::Kind::Lambda: throw OracleError("lambda has no base-type model");
        case Term::Kind::App: return app(t, std::move(st), std::move(tr), fuel, 0, {});
        case Term::Kind::Arith: {
            std::vector<Out> outs;
            for (auto& l : ev(t->t1, st, tr, fuel))
                for (auto& r : ev(t->t2, l.st, l.tr, l.fuel)) {
                    long long a = l.val.i, b = r.val.i, v = 0;
                    switch (t->aop) {
                        case ArithOp::Add: v = a + b; break;
                        case ArithOp::Sub: v = a - b; break;
                        case ArithOp::Mul: v = a * b; break;
                        case ArithOp::Div:
                            if (b == 0) continue;  // undefined: no play
                            v = a / b;
                            break;
                        case ArithOp::Mod:
                            if (b == 0) continue;
                            v = a % b;
                            break;
                    }
                    outs.push_back(Out{r.st, r.tr, r.fuel, Value::of_int(v)});
                }
            return outs;
        }
        case Term::Kind::Cmp: {
            std::vector<Out> outs;
            for (auto& l : ev(t->t1, st, tr, fuel))
                for (auto& r : ev(t->t2, l.st, l.tr, l.fuel)) {
                    long long a = l.val.i, b = r.val.i;
                    bool v = false;
                    switch (t->rop) {
                        case RelOp::Eq: v = a == b; break;
                        case RelOp::Ne: v = a != b; break;
                        case RelOp::Lt: v = a < b; break;
                        case RelOp::Le: v = a <= b; break;
                        case RelOp::Gt: v = a > b; break;
                        case RelOp::Ge: v = a >= b; break;
                    }
                    outs.push_back(Out{r.st, r.tr, r.fuel, Value::of_bool(v)});
                }
            return outs;
        }
        case Term::Kind::Not: {
            auto outs = ev(t->t1, std::move(st), std::move(tr), fuel);
            for (auto& o : outs) o.val = Value::of_bool(!o.val.b);
            return outs;
        }
        case Term::Kind::And:
        case Term::Kind::Or: {
            std::vector<Out> outs;
            for (auto& l : ev(t->t1, st, tr, fuel))
                for (auto& r : ev(t->t2, l.st, l.tr, l.fuel)) {
                    bool v = t->kind == Term::Kind::And ? (l.val.b && r.val.b)
                                                        : (l.val.b || r.val.b);
                    outs.push_back(Out{r.st, r.tr, r.fuel, Value::of_bool(v)});
                }
            return outs;
        }
        case Term::Kind::Seq: {
            std::vector<Out> outs;
            for (auto& l : ev(t->t1, st, tr, fuel))
                for (auto& r : ev(t->t2, l.st, l.tr, l.fuel)) outs.push_back(std::move(r));
            return outs;
        }
        case Term::Kind::Assign: {
            std::vector<Out> outs;
            for (auto& r : ev(t->t2, st, tr, fuel))
                for (auto& o : assign_to(t->t1, r.val, r.st, r.tr, r.fuel))
                    outs.push_back(std::move(o));
            return outs;
        }
        case Term::Kind::Deref: return deref_of(t->t1, std::move(st), std::move(tr), fuel);
        case Term::Kind::If: {
            std::vector<Out> outs;
            for (auto& c : ev(t->t1, st, tr, fuel)) {
                auto branch = ev(c.val.b ? t->t2 : t->t3, c.st, c.tr, c.fuel);
                for (auto& o : branch) outs.push_back(std::move(o));
            }
            return outs;
        }
        case Term::Kind::While: {
            std::vector<Out> outs;
            for (auto& c : ev(t->t1, st, tr, fuel)) {
                if (!c.val.b) {
                    outs.push_back(std::move(c));
                    continue;
                }
                for (auto& b : ev(t->t2, c.st, c.tr, c.fuel))
                    for (auto& o : ev(t, b.st, b.tr, b.fuel)) outs.push_back(std::move(o));
            }
            for (auto& o : outs) o.val = Value::of_int(0);
            return outs;
        }
        case Term::Kind::NewVar: {
            const std::string& x = t->ident;
            std::optional<Value> shadow_cell;
            std::optional<std::vector<Value>> shadow_arr;
            if (auto it = st.cells.find(x); it != st.cells.end()) {
                shadow_cell = it->second;
                st.cells.erase(it);
            }
            if (auto it = st.arrays.find(x); it != st.arrays.end()) {
                shadow_arr = it->second;
                st.arrays.erase(it);
            }
            Value init = t->data == DType::Int ? Value::of_int(t->init)
                                               : Value::of_bool(t->init != 0);
            if (!in_n(init)) return {};  // initial value outside int_n
            if (t->is_array)
                st.arrays[x] = std::vector<Value>((size_t)t->arr_len, init);
            else
                st.cells[x] = init;
            auto outs = ev(t->t1, std::move(st), std::move(tr), fuel);
            for (auto& o : outs) {
                o.st.cells.erase(x);
                o.st.arrays.erase(x);
                if (shadow_cell) o.st.cells[x] = *shadow_cell;
                if (shadow_arr) o.st.arrays[x] = *shadow_arr;
            }
            return outs;
        }
        case Term::Kind::Index: throw OracleError("array element used as a base value");
        case Term::Kind::Length: {
            if (t->t1->kind != Term::Kind::Ident) throw OracleError("lengthof of a non-identifier");
            const std::string& x = t->t1->ident;
            if (is_local(st, x)) {
                auto it = st.arrays.find(x);
                if (it == st.arrays.end()) throw OracleError("lengthof of a non-array");
                return {Out{st, tr, fuel, Value::of_int(static_cast<long long>(it->second.size()))}};
            }
            const Type& ty = free_type(x);
            if (!ty.is_base() || ty.ret.kind != BaseType::Kind::Arr)
                throw OracleError("lengthof of a non-array");
            if (ty.ret.sym_len)
                throw OracleError("lengthof of a symbolic-length array has no finite model");
            return {Out{st, tr, fuel, Value::of_int(ty.ret.len)}};
        }
    }
    return {};
}

std::vector<Out> Interp::deref_of(const TermP& t, St st, std::vector<std::string> tr,
                                  long long fuel) {
    if (cut(tr, fuel)) return {};
    --fuel;
    if (t->kind == Term::Kind::Ident) {
        const std::string& x = t->ident;
        if (st.cells.count(x)) return {Out{st, tr, fuel, st.cells.at(x)}};
        if (st.arrays.count(x)) throw OracleError("array dereferenced without index");
        const Type& ty = free_type(x);
        if (!ty.is_base() || ty.ret.kind != BaseType::Kind::Var)
            throw OracleError("dereference of a non-variable");
        std::vector<TagAtom> tx{TagAtom::of_ident(x)};
        tr.push_back(m_plain(MoveCtor::Read, tx));
        std::vector<Out> outs;
        for (const auto& v : domain(ty.ret.data)) {
            Out o{st, tr, fuel, v};
            o.tr.push_back(m_val(v, tx));
            outs.push_back(std::move(o));
        }
        return outs;
    }
    if (t->kind == Term::Kind::Index) {
        if (t->t1->kind != Term::Kind::Ident) throw OracleError("array expression too complex");
        const std::string& x = t->t1->ident;
        std::vector<Out> outs;
        for (auto& i : ev(t->t2, st, tr, fuel)) {
            long long ix = i.val.i;
            if (i.st.arrays.count(x)) {
                const auto& arr = i.st.arrays.at(x);
                if (ix < 0 || (size_t)ix >= arr.size()) continue;  // blocks
                outs.push_back(Out{i.st, i.tr, i.fuel, arr[(size_t)ix]});
                continue;
            }
            const Type& ty = free_type(x);
            if (ty.ret.kind != BaseType::Kind::Arr)
                throw OracleError("indexing a non-array");
            if (!ty.ret.sym_len && (ix < 0 || ix >= ty.ret.len)) continue;
            if (ty.ret.sym_len && ix < 0) continue;
            std::vector<TagAtom> tc{TagAtom::of_cell(x, aexp_lit(ix))};
            auto tr2 = i.tr;
            tr2.push_back(m_plain(MoveCtor::Read, tc));
            for (const auto& v : domain(ty.ret.data)) {
                Out o{i.st, tr2, i.fuel, v};
                o.tr.push_back(m_val(v, tc));
                outs.push_back(std::move(o));
            }
        }
        return outs;
    }
    if (t->kind == Term::Kind::App) return app(t, std::move(st), std::move(tr), fuel, 1, {});
    throw OracleError("dereference of a non-variable");
}

std::vector<Out> Interp::assign_to(const TermP& t, const Value& v, St st,
                                   std::vector<std::string> tr, long long fuel) {
    if (cut(tr, fuel)) return {};
    --fuel;
    if (t->kind == Term::Kind::Ident) {
        const std::string& x = t->ident;
        if (st.cells.count(x)) {
            if (!in_n(v)) return {};  // value leaves int_n: no play
            st.cells[x] = v;
            return {Out{st, tr, fuel, Value::of_int(0)}};
        }
        if (st.arrays.count(x)) throw OracleError("array assigned without index");
        const Type& ty = free_type(x);
        if (!ty.is_base() || ty.ret.kind != BaseType::Kind::Var)
            throw OracleError("assignment to a non-variable");
        if (!in_n(v)) return {};
        std::vector<TagAtom> tx{TagAtom::of_ident(x)};
        tr.push_back(m_write(v, tx));
        tr.push_back(m_plain(MoveCtor::Ok, tx));
        return {Out{st, tr, fuel, Value::of_int(0)}};
    }
    if (t->kind == Term::Kind::Index) {
        if (t->t1->kind != Term::Kind::Ident) throw OracleError("array expression too complex");
        const std::string& x = t->t1->ident;
        std::vector<Out> outs;
        for (auto& i : ev(t->t2, st, tr, fuel)) {
            long long ix = i.val.i;
            if (i.st.arrays.count(x)) {
                auto& arr = i.st.arrays.at(x);
                if (ix < 0 || (size_t)ix >= arr.size()) continue;
                if (!in_n(v)) continue;
                Out o = std::move(i);
                o.st.arrays.at(x)[(size_t)ix] = v;
                o.val = Value::of_int(0);
                outs.push_back(std::move(o));
                continue;
            }
            const Type& ty = free_type(x);
            if (ty.ret.kind != BaseType::Kind::Arr)
                throw OracleError("indexing a non-array");
            if (!ty.ret.sym_len && (ix < 0 || ix >= ty.ret.len)) continue;
            if (ty.ret.sym_len && ix < 0) continue;
            if (!in_n(v)) continue;
            std::vector<TagAtom> tc{TagAtom::of_cell(x, aexp_lit(ix))};
            Out o = std::move(i);
            o.tr.push_back(m_write(v, tc));
            o.tr.push_back(m_plain(MoveCtor::Ok, tc));
            o.val = Value::of_int(0);
            outs.push_back(std::move(o));
        }
        return outs;
    }
    if (t->kind == Term::Kind::App) return app(t, std::move(st), std::move(tr), fuel, 2, v);
    throw OracleError("assignment to a non-variable");
}

ConcreteAutomaton trie_of(const std::set<std::vector<std::string>>& words) {
    ConcreteAutomaton a;
    std::map<int, std::map<std::string, int>> edges;
    for (const auto& w : words) {
        int s = 0;
        for (const auto& m : w) {
            auto& nexts = edges[s];
            auto it = nexts.find(m);
            if (it == nexts.end()) {
                int d = a.nstates++;
                nexts.emplace(m, d);
                a.trans.emplace_back(s, m, d);
                s = d;
            } else {
                s = it->second;
            }
        }
        a.finals.insert(s);
    }
    return a;
}

}  // namespace

ConcreteAutomaton interpret_concrete(const Context& ctx, const TermP& t, int n,
                                     int max_len) {
    Type ty = typecheck(ctx, t);
    if (!ty.is_base()) throw OracleError("only base-type terms have concrete models");
    const long long fuel0 = 200000;
    Interp in(ctx, n, (size_t)max_len);
    std::set<std::vector<std::string>> words;
    auto emit = [&](std::vector<std::string> w) {
        if (w.size() <= (size_t)max_len) words.insert(std::move(w));
    };
    switch (ty.ret.kind) {
        case BaseType::Kind::Com:
            for (auto& o : in.ev(t, {}, {m_plain(MoveCtor::Run)}, fuel0)) {
                o.tr.push_back(m_plain(MoveCtor::Done));
                emit(std::move(o.tr));
            }
            break;
        case BaseType::Kind::Exp:
            for (auto& o : in.ev(t, {}, {m_plain(MoveCtor::Q)}, fuel0)) {
                if (!in.in_n(o.val)) continue;
                o.tr.push_back(m_val(o.val));
                emit(std::move(o.tr));
            }
            break;
        case BaseType::Kind::Var: {
            for (auto& o : in.deref_of(t, {}, {m_plain(MoveCtor::Read)}, fuel0)) {
                if (!in.in_n(o.val)) continue;
                o.tr.push_back(m_val(o.val));
                emit(std::move(o.tr));
            }
            for (const auto& w : in.domain(ty.ret.data)) {
                for (auto& o : in.assign_to(t, w, {}, {m_write(w)}, fuel0)) {
                    o.tr.push_back(m_plain(MoveCtor::Ok));
                    emit(std::move(o.tr));
                }
            }
            break;
        }
        case BaseType::Kind::Arr: throw OracleError("array-typed top-level terms unsupported");
    }
    return trie_of(words);
}

std::set<std::string> ConcreteAutomaton::words(int max_len) const {
    std::map<int, std::vector<std::pair<std::string, int>>> out_edges;
    for (const auto& [s, m, d] : trans) out_edges[s].push_back({m, d});
    std::set<std::string> acc;
    // the trie is acyclic; simple DFS
    struct Item {
        int s;
        int len;
        std::string w;
    };
    std::vector<Item> stack{{initial, 0, ""}};
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        if (finals.count(it.s)) acc.insert(it.w);
        if (it.len >= max_len) continue;
        for (const auto& [m, d] : out_edges[it.s])
            stack.push_back({d, it.len + 1, it.w.empty() ? m : it.w + " " + m});
    }
    return acc;
}

bool language_equal(const ConcreteAutomaton& a, const ConcreteAutomaton& b, int max_len) {
    return a.words(max_len) == b.words(max_len);
}

bool language_equal(const std::set<std::string>& a, const std::set<std::string>& b) {
    return a == b;
}

}  // namespace sgc
