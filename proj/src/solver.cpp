#include "sgc/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <cctype>
#include <unistd.h>

namespace sgc {

namespace {

int max_index_in(const Play& p) {
    std::vector<SymName> order;
    std::set<SymName> seen;
    for (const auto& c : p.condition) collect_names_ordered(c, order, seen);
    for (const auto& ch : p.arrays) {
        seen.insert(ch.fun.name);
        for (const auto& ev : ch.events) {
            collect_names_ordered(ev.index, order, seen);
            collect_names_ordered(ev.value, order, seen);
        }
    }
    for (const auto& i : p.inputs) seen.insert(i);
    int mx = 0;
    for (const auto& n : seen) mx = std::max(mx, n.index);
    return mx;
}

AExpP strip_reads(const AExpP& a, std::vector<ArrayRead>& reads, int& next_index);

BExpP strip_reads(const BExpP& b, std::vector<ArrayRead>& reads, int& next_index) {
    if (!b) return b;
    switch (b->kind) {
        case BExp::Kind::Lit:
        case BExp::Kind::Name: return b;
        case BExp::Kind::Cmp:
            return bexp_cmp(b->rel, strip_reads(b->al, reads, next_index),
                            strip_reads(b->ar, reads, next_index));
        case BExp::Kind::Not: return bexp_not(strip_reads(b->bl, reads, next_index));
        case BExp::Kind::And:
            return bexp_and(strip_reads(b->bl, reads, next_index),
                            strip_reads(b->br, reads, next_index));
        case BExp::Kind::Or:
            return bexp_or(strip_reads(b->bl, reads, next_index),
                           strip_reads(b->br, reads, next_index));
    }
    return b;
}

AExpP strip_reads(const AExpP& a, std::vector<ArrayRead>& reads, int& next_index) {
    if (!a) return a;
    switch (a->kind) {
        case AExp::Kind::Lit:
        case AExp::Kind::Name: return a;
        case AExp::Kind::Bin:
            return aexp_bin(a->op, strip_reads(a->lhs, reads, next_index),
                            strip_reads(a->rhs, reads, next_index));
        case AExp::Kind::FunApp: {
            AExpP ix = strip_reads(a->index, reads, next_index);
            for (const auto& r : reads)
                if (r.fun == a->fun && r.version == a->version && exp_equal(r.index, ix))
                    return aexp_name(r.result);
            SymName res{next_index++, a->fun.name.dtype,
                        a->fun.name.display() + "(" + render(ix) + ")"};
            reads.push_back(ArrayRead{a->fun, a->version, ix, res});
            return aexp_name(res);
        }
    }
    return a;
}

}  // namespace

Constraint constraint_of(const Play& p) {
    Constraint c;
    c.arrays = p.arrays;
    int next_index = max_index_in(p) + 1;
    for (const auto& b : p.condition) c.conjuncts.push_back(strip_reads(b, c.reads, next_index));
    return c;
}

// ---------------------------------------------------------------------------
// builtin backend
// ---------------------------------------------------------------------------

namespace {

struct Interval {
    // over all integers; empty when lo > hi
    std::optional<long long> lo, hi;

    bool narrow_lo(long long v) {
        if (!lo || *lo < v) {
            lo = v;
            return true;
        }
        return false;
    }
    bool narrow_hi(long long v) {
        if (!hi || *hi > v) {
            hi = v;
            return true;
        }
        return false;
    }
    bool empty() const { return lo && hi && *lo > *hi; }
};

std::map<SymName, Exp> known_exprs(const std::map<SymName, Value>& known) {
    std::map<SymName, Exp> sub;
    for (const auto& [n, v] : known)
        sub.emplace(n, v.dtype == DType::Int ? exp_of(aexp_lit(v.i)) : exp_of(bexp_lit(v.b)));
    return sub;
}

// name = literal / literal = name, bare boolean names, name rel literal
struct AtomView {
    enum class Kind { None, IntEq, BoolEq, Rel } kind = Kind::None;
    SymName name;
    long long lit = 0;
    bool blit = false;
    RelOp rel = RelOp::Eq;  // Rel: name rel lit, normalized with name left
};

AtomView classify(const BExpP& b) {
    AtomView v;
    if (b->kind == BExp::Kind::Name) {
        v.kind = AtomView::Kind::BoolEq;
        v.name = b->name;
        v.blit = true;
        return v;
    }
    if (b->kind == BExp::Kind::Not && b->bl->kind == BExp::Kind::Name) {
        v.kind = AtomView::Kind::BoolEq;
        v.name = b->bl->name;
        v.blit = false;
        return v;
    }
    if (b->kind != BExp::Kind::Cmp) return v;
    const AExpP *nm = nullptr, *lt = nullptr;
    bool flipped = false;
    if (b->al->kind == AExp::Kind::Name && b->ar->kind == AExp::Kind::Lit) {
        nm = &b->al;
        lt = &b->ar;
    } else if (b->ar->kind == AExp::Kind::Name && b->al->kind == AExp::Kind::Lit) {
        nm = &b->ar;
        lt = &b->al;
        flipped = true;
    } else {
        return v;
    }
    v.name = (*nm)->name;
    v.lit = (*lt)->lit;
    RelOp r = b->rel;
    if (flipped) {
        switch (r) {
            case RelOp::Lt: r = RelOp::Gt; break;
            case RelOp::Le: r = RelOp::Ge; break;
            case RelOp::Gt: r = RelOp::Lt; break;
            case RelOp::Ge: r = RelOp::Le; break;
            default: break;
        }
    }
    if (r == RelOp::Eq) {
        v.kind = AtomView::Kind::IntEq;
    } else {
        v.kind = AtomView::Kind::Rel;
        v.rel = r;
    }
    return v;
}

bool eval_bool(const BExpP& b, const Evaluation& rho) {
    try {
        return evaluate(b, rho);
    } catch (const EvalError&) {
        return false;  // e.g. division by zero: not a model
    }
}

// Builds rho.arrays from the chains and derives every read result. Returns
// false when an existing binding for a result disagrees or evaluation fails.
bool derive_reads(const Constraint& c, Evaluation& rho) {
    try {
        for (const auto& ch : c.arrays) {
            ArrayValue av;
            int k = 0;
            for (const auto& ev : ch.events) {
                ++k;
                if (ev.is_init) {
                    av.def = ev.value.dtype == DType::Int
                                 ? Value::of_int(evaluate(ev.value.a, rho))
                                 : Value::of_bool(evaluate(ev.value.b, rho));
                    av.entries.clear();
                } else {
                    long long i = evaluate(ev.index, rho);
                    av.entries[i] = ev.value.dtype == DType::Int
                                        ? Value::of_int(evaluate(ev.value.a, rho))
                                        : Value::of_bool(evaluate(ev.value.b, rho));
                }
                rho.arrays[{ch.fun.name, k}] = av;
            }
        }
        for (const auto& r : c.reads) {
            auto it = rho.arrays.find({r.fun.name, r.version});
            if (it == rho.arrays.end()) return false;
            Value v = it->second.at(evaluate(r.index, rho));
            auto nm = rho.names.find(r.result);
            if (nm == rho.names.end())
                rho.names[r.result] = v;
            else if (!(nm->second == v))
                return false;
        }
    } catch (const EvalError&) {
        return false;
    }
    return true;
}

}  // namespace

Evaluation with_derived_arrays(const Constraint& c, Evaluation rho) {
    derive_reads(c, rho);
    return rho;
}

bool validate_model(const Constraint& c, const Evaluation& rho) {
    Evaluation full = rho;
    full.arrays.clear();  // chains are authoritative
    if (!derive_reads(c, full)) return false;
    // derived results must agree with the supplied bindings
    for (const auto& r : c.reads) {
        auto given = rho.names.find(r.result);
        if (given != rho.names.end() && !(given->second == full.names.at(r.result)))
            return false;
    }
    for (const auto& b : c.conjuncts)
        if (!eval_bool(b, full)) return false;
    return true;
}

SatResult check_sat_builtin(const Constraint& c, int bound) {
    // ---- equality propagation and interval narrowing ----
    std::map<SymName, Value> known;
    std::map<SymName, Interval> intervals;
    std::set<SymName> results;
    for (const auto& r : c.reads) results.insert(r.result);
    std::vector<BExpP> residual = c.conjuncts;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<BExpP> next;
        auto sub = known_exprs(known);
        for (const auto& b0 : residual) {
            BExpP b = fold(rewrite(b0, sub));
            if (auto lv = as_literal(b)) {
                if (!*lv) return SatResult::unsat();
                continue;  // satisfied
            }
            AtomView v = classify(b);
            switch (v.kind) {
                case AtomView::Kind::IntEq: {
                    auto it = known.find(v.name);
                    if (it != known.end()) {
                        if (it->second.i != v.lit) return SatResult::unsat();
                        continue;  // already pinned to the same value
                    }
                    known[v.name] = Value::of_int(v.lit);
                    changed = true;
                    continue;
                }
                case AtomView::Kind::BoolEq: {
                    auto it = known.find(v.name);
                    if (it != known.end()) {
                        if (it->second.b != v.blit) return SatResult::unsat();
                        continue;
                    }
                    known[v.name] = Value::of_bool(v.blit);
                    changed = true;
                    continue;
                }
                case AtomView::Kind::Rel: {
                    Interval& iv = intervals[v.name];
                    switch (v.rel) {
                        case RelOp::Lt: iv.narrow_hi(v.lit - 1); break;
                        case RelOp::Le: iv.narrow_hi(v.lit); break;
                        case RelOp::Gt: iv.narrow_lo(v.lit + 1); break;
                        case RelOp::Ge: iv.narrow_lo(v.lit); break;
                        default: next.push_back(b); continue;  // Ne stays
                    }
                    if (iv.empty()) return SatResult::unsat();
                    if (iv.lo && iv.hi && *iv.lo == *iv.hi && !known.count(v.name)) {
                        known[v.name] = Value::of_int(*iv.lo);
                        changed = true;
                    }
                    continue;
                }
                case AtomView::Kind::None: next.push_back(b); break;
            }
        }
        residual = std::move(next);
    }
    // interval atoms are retained as checks too (a name may also be known)
    std::vector<BExpP> checks = residual;
    for (const auto& [n, iv] : intervals) {
        if (iv.lo)
            checks.push_back(bexp_cmp(RelOp::Ge, aexp_name(n), aexp_lit(*iv.lo)));
        if (iv.hi)
            checks.push_back(bexp_cmp(RelOp::Le, aexp_name(n), aexp_lit(*iv.hi)));
    }

    // ---- decision variables, in first-appearance order ----
    std::vector<SymName> order;
    std::set<SymName> seen;
    for (const auto& b : c.conjuncts) collect_names_ordered(b, order, seen);
    for (const auto& r : c.reads) collect_names_ordered(r.index, order, seen);
    for (const auto& ch : c.arrays)
        for (const auto& ev : ch.events) {
            collect_names_ordered(ev.index, order, seen);
            collect_names_ordered(ev.value, order, seen);
        }
    std::vector<SymName> vars;
    for (const auto& n : order)
        if (!known.count(n) && !results.count(n)) vars.push_back(n);

    // value menu per variable: box intersected with the narrowed interval
    bool domains_complete = true;
    std::vector<std::vector<Value>> menu(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].dtype == DType::Bool) {
            menu[i] = {Value::of_bool(false), Value::of_bool(true)};
            continue;
        }
        Interval iv = intervals.count(vars[i]) ? intervals[vars[i]] : Interval{};
        long long lo = iv.lo ? std::max(*iv.lo, -(long long)bound) : -(long long)bound;
        long long hi = iv.hi ? std::min(*iv.hi, (long long)bound) : (long long)bound;
        if ((!iv.lo || *iv.lo < -(long long)bound) || (!iv.hi || *iv.hi > (long long)bound))
            domains_complete = false;
        for (long long k = 0; k <= (long long)bound; ++k) {
            if (k >= lo && k <= hi) menu[i].push_back(Value::of_int(k));
            if (k > 0 && -k >= lo && -k <= hi) menu[i].push_back(Value::of_int(-k));
        }
    }

    // conjunct scheduling: check as soon as the last referenced decision
    // variable is assigned; read-dependent ones wait for the full assignment
    std::map<SymName, int> var_pos;
    for (size_t i = 0; i < vars.size(); ++i) var_pos[vars[i]] = (int)i;
    std::vector<std::vector<BExpP>> at_depth(vars.size() + 1);
    std::vector<BExpP> at_end;
    for (const auto& b : checks) {
        std::set<SymName> ns;
        collect_names(b, ns);
        int last = -1;
        bool needs_reads = false;
        for (const auto& n : ns) {
            if (results.count(n)) needs_reads = true;
            auto it = var_pos.find(n);
            if (it != var_pos.end()) last = std::max(last, it->second);
        }
        if (needs_reads)
            at_end.push_back(b);
        else
            at_depth[last + 1].push_back(b);
    }
    bool arrays_present = !c.arrays.empty() || !c.reads.empty();

    Evaluation rho;
    rho.names = known;
    // depth-first enumeration with early conjunct checks
    std::vector<size_t> pick;
    auto check_at = [&](size_t depth) {
        for (const auto& b : at_depth[depth])
            if (!eval_bool(b, rho)) return false;
        return true;
    };
    auto final_check = [&]() {
        Evaluation full = rho;
        if (arrays_present && !derive_reads(c, full)) return std::optional<Evaluation>{};
        for (const auto& b : at_end)
            if (!eval_bool(b, full)) return std::optional<Evaluation>{};
        return std::optional<Evaluation>{std::move(full)};
    };
    // conjuncts with no decision variables are fully determined already
    if (!check_at(0)) return SatResult::unsat();
    size_t depth = 0;
    pick.assign(vars.size(), 0);
    while (true) {
        if (depth == vars.size()) {
            if (auto m = final_check()) return SatResult::sat(std::move(*m));
            if (vars.empty()) {
                return domains_complete ? SatResult::unsat()
                                        : SatResult::unknown("no model within bound");
            }
            --depth;  // backtrack
            rho.names.erase(vars[depth]);
            ++pick[depth];
        }
        while (true) {
            if (pick[depth] < menu[depth].size()) {
                rho.names[vars[depth]] = menu[depth][pick[depth]];
                if (check_at(depth + 1)) {
                    ++depth;
                    if (depth < vars.size()) pick[depth] = 0;
                    break;
                }
                rho.names.erase(vars[depth]);
                ++pick[depth];
                continue;
            }
            // exhausted this level
            if (depth == 0)
                return domains_complete ? SatResult::unsat()
                                        : SatResult::unknown("no model within bound");
            --depth;
            rho.names.erase(vars[depth]);
            ++pick[depth];
        }
    }
}

// ---------------------------------------------------------------------------
// SMT-LIB2 backend
// ---------------------------------------------------------------------------

namespace {

std::string smt_name(const SymName& n) { return "v" + std::to_string(n.index); }

std::string smt_lit(long long v) {
    if (v < 0) return "(- " + std::to_string(-v) + ")";
    return std::to_string(v);
}

std::string smt_of(const AExpP& a) {
    switch (a->kind) {
        case AExp::Kind::Lit: return smt_lit(a->lit);
        case AExp::Kind::Name: return smt_name(a->name);
        case AExp::Kind::Bin: {
            std::string op;
            switch (a->op) {
                case ArithOp::Add: op = "+"; break;
                case ArithOp::Sub: op = "-"; break;
                case ArithOp::Mul: op = "*"; break;
                case ArithOp::Div: op = "div"; break;
                case ArithOp::Mod: op = "mod"; break;
            }
            return "(" + op + " " + smt_of(a->lhs) + " " + smt_of(a->rhs) + ")";
        }
        case AExp::Kind::FunApp:
            throw std::logic_error("function application in solver conjunct");
    }
    return "";
}

std::string smt_of(const BExpP& b) {
    switch (b->kind) {
        case BExp::Kind::Lit: return b->lit ? "true" : "false";
        case BExp::Kind::Name: return smt_name(b->name);
        case BExp::Kind::Cmp: {
            std::string l = smt_of(b->al), r = smt_of(b->ar);
            switch (b->rel) {
                case RelOp::Eq: return "(= " + l + " " + r + ")";
                case RelOp::Ne: return "(not (= " + l + " " + r + "))";
                case RelOp::Lt: return "(< " + l + " " + r + ")";
                case RelOp::Le: return "(<= " + l + " " + r + ")";
                case RelOp::Gt: return "(> " + l + " " + r + ")";
                case RelOp::Ge: return "(>= " + l + " " + r + ")";
            }
            return "";
        }
        case BExp::Kind::Not: return "(not " + smt_of(b->bl) + ")";
        case BExp::Kind::And: return "(and " + smt_of(b->bl) + " " + smt_of(b->br) + ")";
        case BExp::Kind::Or: return "(or " + smt_of(b->bl) + " " + smt_of(b->br) + ")";
    }
    return "";
}

std::string smt_value(const Exp& e) {
    return e.dtype == DType::Int ? smt_of(e.a) : smt_of(e.b);
}

std::vector<SymName> scalar_names(const Constraint& c) {
    std::vector<SymName> order;
    std::set<SymName> seen;
    for (const auto& b : c.conjuncts) collect_names_ordered(b, order, seen);
    for (const auto& r : c.reads) {
        collect_names_ordered(r.index, order, seen);
        if (seen.insert(r.result).second) order.push_back(r.result);
    }
    for (const auto& ch : c.arrays)
        for (const auto& ev : ch.events) {
            collect_names_ordered(ev.index, order, seen);
            collect_names_ordered(ev.value, order, seen);
        }
    return order;
}

}  // namespace

std::string to_smtlib(const Constraint& c) {
    std::ostringstream os;
    os << "(set-logic ALL)\n";
    for (const auto& n : scalar_names(c))
        os << "(declare-const " << smt_name(n) << " "
           << (n.dtype == DType::Int ? "Int" : "Bool") << ")\n";
    for (size_t i = 0; i < c.arrays.size(); ++i) {
        const auto& ch = c.arrays[i];
        std::string elem = ch.fun.name.dtype == DType::Int ? "Int" : "Bool";
        std::string sort = "(Array Int " + elem + ")";
        std::string base = "a" + std::to_string(i);
        os << "(declare-const " << base << "_0 " << sort << ")\n";
        for (size_t k = 0; k < ch.events.size(); ++k) {
            const auto& ev = ch.events[k];
            os << "(define-fun " << base << "_" << (k + 1) << " () " << sort << " ";
            if (ev.is_init)
                os << "((as const " << sort << ") " << smt_value(ev.value) << ")";
            else
                os << "(store " << base << "_" << k << " " << smt_of(ev.index) << " "
                   << smt_value(ev.value) << ")";
            os << ")\n";
        }
    }
    for (const auto& r : c.reads) {
        // locate the chain index for a stable array symbol
        size_t ai = 0;
        for (; ai < c.arrays.size(); ++ai)
            if (c.arrays[ai].fun == r.fun) break;
        os << "(assert (= " << smt_name(r.result) << " (select a" << ai << "_" << r.version
           << " " << smt_of(r.index) << ")))\n";
    }
    for (const auto& b : c.conjuncts) os << "(assert " << smt_of(b) << ")\n";
    os << "(check-sat)\n(get-model)\n";
    return os.str();
}

namespace {

std::vector<std::string> tokenize_sexpr(const std::string& s) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : s) {
        if (ch == '(' || ch == ')') {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
            toks.push_back(std::string(1, ch));
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

}  // namespace

SatResult check_sat_external(const Constraint& c, const std::string& command) {
    std::string text = to_smtlib(c);
    char path[] = "/tmp/sgc_smt_XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0) return SatResult::unknown("cannot create temporary file");
    {
        FILE* f = fdopen(fd, "w");
        fputs(text.c_str(), f);
        fclose(f);
    }
    std::string cmd = command + " " + path + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        std::remove(path);
        return SatResult::unknown("cannot run solver command");
    }
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    std::remove(path);
    auto toks = tokenize_sexpr(out);
    size_t pos = 0;
    std::string verdict;
    for (; pos < toks.size(); ++pos)
        if (toks[pos] == "sat" || toks[pos] == "unsat" || toks[pos] == "unknown") {
            verdict = toks[pos];
            break;
        }
    if (verdict.empty()) {
        std::string first = out.substr(0, out.find('\n'));
        return SatResult::unknown("solver protocol error (exit " + std::to_string(status) +
                                  "): " + first);
    }
    if (verdict == "unsat") return SatResult::unsat();
    if (verdict == "unknown") return SatResult::unknown("solver returned unknown");
    // parse the model: (define-fun vN () Int 5) / (- 5) / true / false
    std::map<int, Value> parsed;
    for (size_t i = pos; i + 5 < toks.size(); ++i) {
        if (toks[i] != "define-fun") continue;
        const std::string& name = toks[i + 1];
        if (name.size() < 2 || name[0] != 'v') continue;
        size_t j = i + 2;
        if (j < toks.size() && toks[j] == "(") {
            while (j < toks.size() && toks[j] != ")") ++j;
            ++j;  // skip ')'
        }
        if (j >= toks.size()) break;
        const std::string& sort = toks[j];
        ++j;
        if (j >= toks.size()) break;
        Value v;
        if (sort == "Int") {
            if (toks[j] == "(" && j + 2 < toks.size() && toks[j + 1] == "-")
                v = Value::of_int(-std::stoll(toks[j + 2]));
            else if (!toks[j].empty() &&
                     (std::isdigit(static_cast<unsigned char>(toks[j][0])) || toks[j][0] == '-'))
                v = Value::of_int(std::stoll(toks[j]));
            else
                continue;
        } else if (sort == "Bool") {
            if (toks[j] != "true" && toks[j] != "false") continue;
            v = Value::of_bool(toks[j] == "true");
        } else {
            continue;  // array models are recomputed from the chains
        }
        try {
            parsed[std::stoi(name.substr(1))] = v;
        } catch (...) {
            continue;
        }
    }
    Evaluation rho;
    for (const auto& n : scalar_names(c)) {
        auto it = parsed.find(n.index);
        if (it != parsed.end())
            rho.names[n] = it->second;
        else
            rho.names[n] = n.dtype == DType::Int ? Value::of_int(0) : Value::of_bool(false);
    }
    if (!validate_model(c, rho))
        return SatResult::unknown("solver model failed validation");
    return SatResult::sat(with_derived_arrays(c, std::move(rho)));
}

SatResult check_sat(const Constraint& c, const SolverOptions& opts) {
    if (opts.exec.empty()) return check_sat_builtin(c, opts.bound);
    return check_sat_external(c, opts.exec);
}

}  // namespace sgc
