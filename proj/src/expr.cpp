#include "sgc/expr.hpp"

#include <sstream>

namespace sgc {

std::string to_string(DType d) { return d == DType::Int ? "int" : "bool"; }

std::string SymName::display() const {
    if (!hint.empty()) return hint;
    return "X" + std::to_string(index);
}

SymName NamePool::fresh(DType dtype, const std::string& hint) {
    int idx = 1;
    while (used_.count(idx)) ++idx;
    used_.insert(idx);
    std::string h = hint;
    if (!h.empty()) {
        int n = ++hint_counts_[h];
        if (n > 1) h += std::to_string(n);
    }
    return SymName{idx, dtype, h};
}

std::string to_string(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
        case ArithOp::Mod: return "%";
    }
    return "?";
}

std::string to_string(RelOp op) {
    switch (op) {
        case RelOp::Eq: return "=";
        case RelOp::Ne: return "!=";
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
    }
    return "?";
}

AExpP aexp_lit(long long n) {
    auto e = std::make_shared<AExp>();
    e->kind = AExp::Kind::Lit;
    e->lit = n;
    return e;
}

AExpP aexp_name(SymName x) {
    auto e = std::make_shared<AExp>();
    e->kind = AExp::Kind::Name;
    e->name = x;
    return e;
}

AExpP aexp_bin(ArithOp op, AExpP l, AExpP r) {
    auto e = std::make_shared<AExp>();
    e->kind = AExp::Kind::Bin;
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

AExpP aexp_funapp(FunSym f, AExpP index, int version) {
    auto e = std::make_shared<AExp>();
    e->kind = AExp::Kind::FunApp;
    e->fun = f;
    e->version = version;
    e->index = std::move(index);
    return e;
}

BExpP bexp_lit(bool v) {
    auto e = std::make_shared<BExp>();
    e->kind = BExp::Kind::Lit;
    e->lit = v;
    return e;
}

BExpP bexp_name(SymName x) {
    auto e = std::make_shared<BExp>();
    e->kind = BExp::Kind::Name;
    e->name = x;
    return e;
}

BExpP bexp_cmp(RelOp rel, AExpP l, AExpP r) {
    auto e = std::make_shared<BExp>();
    e->kind = BExp::Kind::Cmp;
    e->rel = rel;
    e->al = std::move(l);
    e->ar = std::move(r);
    return e;
}

BExpP bexp_not(BExpP b) {
    auto e = std::make_shared<BExp>();
    e->kind = BExp::Kind::Not;
    e->bl = std::move(b);
    return e;
}

BExpP bexp_and(BExpP l, BExpP r) {
    auto e = std::make_shared<BExp>();
    e->kind = BExp::Kind::And;
    e->bl = std::move(l);
    e->br = std::move(r);
    return e;
}

BExpP bexp_or(BExpP l, BExpP r) {
    auto e = std::make_shared<BExp>();
    e->kind = BExp::Kind::Or;
    e->bl = std::move(l);
    e->br = std::move(r);
    return e;
}

Exp exp_of(AExpP a) { return Exp{DType::Int, std::move(a), nullptr}; }
Exp exp_of(BExpP b) { return Exp{DType::Bool, nullptr, std::move(b)}; }
Exp exp_of_name(SymName x) {
    return x.dtype == DType::Int ? exp_of(aexp_name(x)) : exp_of(bexp_name(x));
}

std::string Value::display() const {
    if (dtype == DType::Int) return std::to_string(i);
    return b ? "tt" : "ff";
}

Value Evaluation::get(const SymName& x) const {
    auto it = names.find(x);
    if (it == names.end()) throw EvalError("unbound symbolic name " + x.display());
    return it->second;
}

long long evaluate(const AExpP& a, const Evaluation& rho) {
    switch (a->kind) {
        case AExp::Kind::Lit: return a->lit;
        case AExp::Kind::Name: {
            Value v = rho.get(a->name);
            if (v.dtype != DType::Int) throw EvalError("type mismatch at " + a->name.display());
            return v.i;
        }
        case AExp::Kind::Bin: {
            long long l = evaluate(a->lhs, rho);
            long long r = evaluate(a->rhs, rho);
            switch (a->op) {
                case ArithOp::Add: return l + r;
                case ArithOp::Sub: return l - r;
                case ArithOp::Mul: return l * r;
                case ArithOp::Div:
                    if (r == 0) throw EvalError("division by zero");
                    return l / r;
                case ArithOp::Mod:
                    if (r == 0) throw EvalError("modulo by zero");
                    return l % r;
            }
            throw EvalError("bad op");
        }
        case AExp::Kind::FunApp: {
            auto it = rho.arrays.find({a->fun.name, a->version});
            if (it == rho.arrays.end())
                throw EvalError("unbound array symbol " + a->fun.name.display());
            long long i = evaluate(a->index, rho);
            Value v = it->second.at(i);
            if (v.dtype != DType::Int) throw EvalError("array element type mismatch");
            return v.i;
        }
    }
    throw EvalError("bad AExp");
}

bool evaluate(const BExpP& b, const Evaluation& rho) {
    switch (b->kind) {
        case BExp::Kind::Lit: return b->lit;
        case BExp::Kind::Name: {
            Value v = rho.get(b->name);
            if (v.dtype != DType::Bool) throw EvalError("type mismatch at " + b->name.display());
            return v.b;
        }
        case BExp::Kind::Cmp: {
            long long l = evaluate(b->al, rho);
            long long r = evaluate(b->ar, rho);
            switch (b->rel) {
                case RelOp::Eq: return l == r;
                case RelOp::Ne: return l != r;
                case RelOp::Lt: return l < r;
                case RelOp::Le: return l <= r;
                case RelOp::Gt: return l > r;
                case RelOp::Ge: return l >= r;
            }
            throw EvalError("bad rel");
        }
        case BExp::Kind::Not: return !evaluate(b->bl, rho);
        case BExp::Kind::And: return evaluate(b->bl, rho) && evaluate(b->br, rho);
        case BExp::Kind::Or: return evaluate(b->bl, rho) || evaluate(b->br, rho);
    }
    throw EvalError("bad BExp");
}

Value evaluate(const Exp& e, const Evaluation& rho) {
    if (e.dtype == DType::Int) return Value::of_int(evaluate(e.a, rho));
    return Value::of_bool(evaluate(e.b, rho));
}

void collect_names(const AExpP& a, std::set<SymName>& out) {
    if (!a) return;
    switch (a->kind) {
        case AExp::Kind::Lit: return;
        case AExp::Kind::Name: out.insert(a->name); return;
        case AExp::Kind::Bin:
            collect_names(a->lhs, out);
            collect_names(a->rhs, out);
            return;
        case AExp::Kind::FunApp: collect_names(a->index, out); return;
    }
}

void collect_names(const BExpP& b, std::set<SymName>& out) {
    if (!b) return;
    switch (b->kind) {
        case BExp::Kind::Lit: return;
        case BExp::Kind::Name: out.insert(b->name); return;
        case BExp::Kind::Cmp:
            collect_names(b->al, out);
            collect_names(b->ar, out);
            return;
        case BExp::Kind::Not: collect_names(b->bl, out); return;
        case BExp::Kind::And:
        case BExp::Kind::Or:
            collect_names(b->bl, out);
            collect_names(b->br, out);
            return;
    }
}

bool exp_equal(const AExpP& a, const AExpP& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case AExp::Kind::Lit: return a->lit == b->lit;
        case AExp::Kind::Name: return a->name == b->name;
        case AExp::Kind::Bin:
            return a->op == b->op && exp_equal(a->lhs, b->lhs) && exp_equal(a->rhs, b->rhs);
        case AExp::Kind::FunApp:
            return a->fun == b->fun && a->version == b->version && exp_equal(a->index, b->index);
    }
    return false;
}

bool exp_equal(const BExpP& a, const BExpP& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case BExp::Kind::Lit: return a->lit == b->lit;
        case BExp::Kind::Name: return a->name == b->name;
        case BExp::Kind::Cmp:
            return a->rel == b->rel && exp_equal(a->al, b->al) && exp_equal(a->ar, b->ar);
        case BExp::Kind::Not: return exp_equal(a->bl, b->bl);
        case BExp::Kind::And:
        case BExp::Kind::Or: return exp_equal(a->bl, b->bl) && exp_equal(a->br, b->br);
    }
    return false;
}

bool exp_equal(const Exp& a, const Exp& b) {
    if (a.dtype != b.dtype) return false;
    return a.dtype == DType::Int ? exp_equal(a.a, b.a) : exp_equal(a.b, b.b);
}

AExpP rewrite(const AExpP& a, const std::map<SymName, Exp>& subst) {
    if (!a) return a;
    switch (a->kind) {
        case AExp::Kind::Lit: return a;
        case AExp::Kind::Name: {
            auto it = subst.find(a->name);
            if (it == subst.end()) return a;
            if (it->second.dtype != DType::Int)
                throw EvalError("bool expression substituted into int position");
            return it->second.a;
        }
        case AExp::Kind::Bin: return aexp_bin(a->op, rewrite(a->lhs, subst), rewrite(a->rhs, subst));
        case AExp::Kind::FunApp:
            return aexp_funapp(a->fun, rewrite(a->index, subst), a->version);
    }
    return a;
}

BExpP rewrite(const BExpP& b, const std::map<SymName, Exp>& subst) {
    if (!b) return b;
    switch (b->kind) {
        case BExp::Kind::Lit: return b;
        case BExp::Kind::Name: {
            auto it = subst.find(b->name);
            if (it == subst.end()) return b;
            if (it->second.dtype != DType::Bool)
                throw EvalError("int expression substituted into bool position");
            return it->second.b;
        }
        case BExp::Kind::Cmp: return bexp_cmp(b->rel, rewrite(b->al, subst), rewrite(b->ar, subst));
        case BExp::Kind::Not: return bexp_not(rewrite(b->bl, subst));
        case BExp::Kind::And: return bexp_and(rewrite(b->bl, subst), rewrite(b->br, subst));
        case BExp::Kind::Or: return bexp_or(rewrite(b->bl, subst), rewrite(b->br, subst));
    }
    return b;
}

Exp rewrite(const Exp& e, const std::map<SymName, Exp>& subst) {
    if (e.dtype == DType::Int) return exp_of(rewrite(e.a, subst));
    return exp_of(rewrite(e.b, subst));
}

std::optional<long long> as_literal(const AExpP& a) {
    if (a && a->kind == AExp::Kind::Lit) return a->lit;
    return std::nullopt;
}

std::optional<bool> as_literal(const BExpP& b) {
    if (b && b->kind == BExp::Kind::Lit) return b->lit;
    return std::nullopt;
}

void collect_names_ordered(const AExpP& a, std::vector<SymName>& order,
                           std::set<SymName>& seen) {
    if (!a) return;
    switch (a->kind) {
        case AExp::Kind::Lit: break;
        case AExp::Kind::Name:
            if (seen.insert(a->name).second) order.push_back(a->name);
            break;
        case AExp::Kind::Bin:
            collect_names_ordered(a->lhs, order, seen);
            collect_names_ordered(a->rhs, order, seen);
            break;
        case AExp::Kind::FunApp:
            if (seen.insert(a->fun.name).second) order.push_back(a->fun.name);
            collect_names_ordered(a->index, order, seen);
            break;
    }
}

void collect_names_ordered(const BExpP& b, std::vector<SymName>& order,
                           std::set<SymName>& seen) {
    if (!b) return;
    switch (b->kind) {
        case BExp::Kind::Lit: break;
        case BExp::Kind::Name:
            if (seen.insert(b->name).second) order.push_back(b->name);
            break;
        case BExp::Kind::Cmp:
            collect_names_ordered(b->al, order, seen);
            collect_names_ordered(b->ar, order, seen);
            break;
        case BExp::Kind::Not: collect_names_ordered(b->bl, order, seen); break;
        case BExp::Kind::And:
        case BExp::Kind::Or:
            collect_names_ordered(b->bl, order, seen);
            collect_names_ordered(b->br, order, seen);
            break;
    }
}

void collect_names_ordered(const Exp& e, std::vector<SymName>& order,
                           std::set<SymName>& seen) {
    collect_names_ordered(e.a, order, seen);
    collect_names_ordered(e.b, order, seen);
}

SymName rename_hints(SymName n, const std::map<int, std::string>& hints) {
    auto it = hints.find(n.index);
    if (it != hints.end()) n.hint = it->second;
    return n;
}

AExpP rename_hints(const AExpP& a, const std::map<int, std::string>& hints) {
    if (!a) return a;
    switch (a->kind) {
        case AExp::Kind::Lit: return a;
        case AExp::Kind::Name: return aexp_name(rename_hints(a->name, hints));
        case AExp::Kind::Bin:
            return aexp_bin(a->op, rename_hints(a->lhs, hints), rename_hints(a->rhs, hints));
        case AExp::Kind::FunApp:
            return aexp_funapp(FunSym{rename_hints(a->fun.name, hints)},
                               rename_hints(a->index, hints), a->version);
    }
    return a;
}

BExpP rename_hints(const BExpP& b, const std::map<int, std::string>& hints) {
    if (!b) return b;
    switch (b->kind) {
        case BExp::Kind::Lit: return b;
        case BExp::Kind::Name: return bexp_name(rename_hints(b->name, hints));
        case BExp::Kind::Cmp:
            return bexp_cmp(b->rel, rename_hints(b->al, hints), rename_hints(b->ar, hints));
        case BExp::Kind::Not: return bexp_not(rename_hints(b->bl, hints));
        case BExp::Kind::And:
            return bexp_and(rename_hints(b->bl, hints), rename_hints(b->br, hints));
        case BExp::Kind::Or:
            return bexp_or(rename_hints(b->bl, hints), rename_hints(b->br, hints));
    }
    return b;
}

Exp rename_hints(const Exp& e, const std::map<int, std::string>& hints) {
    Exp r = e;
    r.a = rename_hints(e.a, hints);
    r.b = rename_hints(e.b, hints);
    return r;
}

namespace {

// Evaluation of the expression can never raise EvalError once its names are
// bound: no division, modulo, or array read. Folds that drop a subexpression
// are restricted to total ones so an undefined guard stays undefined.
bool total(const AExpP& a) {
    if (!a) return true;
    if (a->kind == AExp::Kind::FunApp) return false;
    if (a->kind == AExp::Kind::Bin && (a->op == ArithOp::Div || a->op == ArithOp::Mod))
        return false;
    return total(a->lhs) && total(a->rhs);
}

bool total(const BExpP& b) {
    if (!b) return true;
    return total(b->al) && total(b->ar) && total(b->bl) && total(b->br);
}

}  // namespace

AExpP fold(const AExpP& a) {
    if (!a) return a;
    switch (a->kind) {
        case AExp::Kind::Lit:
        case AExp::Kind::Name: return a;
        case AExp::Kind::Bin: {
            AExpP l = fold(a->lhs), r = fold(a->rhs);
            auto lv = as_literal(l), rv = as_literal(r);
            if (lv && rv) {
                Evaluation empty;
                try {
                    return aexp_lit(evaluate(aexp_bin(a->op, l, r), empty));
                } catch (const EvalError&) {
                    // division by zero stays symbolic
                }
            }
            // identity elements
            if (a->op == ArithOp::Add && lv && *lv == 0) return r;
            if ((a->op == ArithOp::Add || a->op == ArithOp::Sub) && rv && *rv == 0) return l;
            if (a->op == ArithOp::Mul && lv && *lv == 1) return r;
            if ((a->op == ArithOp::Mul || a->op == ArithOp::Div) && rv && *rv == 1) return l;
            if (a->op == ArithOp::Mul && ((lv && *lv == 0 && total(r)) ||
                                          (rv && *rv == 0 && total(l))))
                return aexp_lit(0);
            if (l == a->lhs && r == a->rhs) return a;
            return aexp_bin(a->op, l, r);
        }
        case AExp::Kind::FunApp: {
            AExpP i = fold(a->index);
            if (i == a->index) return a;
            return aexp_funapp(a->fun, i, a->version);
        }
    }
    return a;
}

BExpP fold(const BExpP& b) {
    if (!b) return b;
    switch (b->kind) {
        case BExp::Kind::Lit:
        case BExp::Kind::Name: return b;
        case BExp::Kind::Cmp: {
            AExpP l = fold(b->al), r = fold(b->ar);
            auto lv = as_literal(l), rv = as_literal(r);
            if (lv && rv) {
                Evaluation empty;
                return bexp_lit(evaluate(bexp_cmp(b->rel, l, r), empty));
            }
            if (exp_equal(l, r) && total(l)) {
                // X = X and X <= X fold to tt; X != X, X < X to ff
                switch (b->rel) {
                    case RelOp::Eq:
                    case RelOp::Le:
                    case RelOp::Ge: return bexp_lit(true);
                    case RelOp::Ne:
                    case RelOp::Lt:
                    case RelOp::Gt: return bexp_lit(false);
                }
            }
            if (l == b->al && r == b->ar) return b;
            return bexp_cmp(b->rel, l, r);
        }
        case BExp::Kind::Not: {
            BExpP x = fold(b->bl);
            if (auto v = as_literal(x)) return bexp_lit(!*v);
            if (x->kind == BExp::Kind::Cmp) {
                // push negation into the comparison: !(a < b) becomes a >= b
                RelOp neg = RelOp::Eq;
                switch (x->rel) {
                    case RelOp::Eq: neg = RelOp::Ne; break;
                    case RelOp::Ne: neg = RelOp::Eq; break;
                    case RelOp::Lt: neg = RelOp::Ge; break;
                    case RelOp::Le: neg = RelOp::Gt; break;
                    case RelOp::Gt: neg = RelOp::Le; break;
                    case RelOp::Ge: neg = RelOp::Lt; break;
                }
                return bexp_cmp(neg, x->al, x->ar);
            }
            if (x->kind == BExp::Kind::Not) return x->bl;
            if (x == b->bl) return b;
            return bexp_not(x);
        }
        case BExp::Kind::And: {
            BExpP l = fold(b->bl), r = fold(b->br);
            auto lv = as_literal(l), rv = as_literal(r);
            // evaluation is left-to-right and short-circuit, so a literal
            // left side always folds, but an undefined left side may only be
            // dropped when it is total
            if (lv) return *lv ? r : bexp_lit(false);
            if (rv && *rv) return l;
            if (rv && !*rv && total(l)) return bexp_lit(false);
            if (l == b->bl && r == b->br) return b;
            return bexp_and(l, r);
        }
        case BExp::Kind::Or: {
            BExpP l = fold(b->bl), r = fold(b->br);
            auto lv = as_literal(l), rv = as_literal(r);
            // evaluation is left-to-right and short-circuit, so a literal
            // left side always folds, but an undefined left side may only be
            // dropped when it is total
            if (lv) return *lv ? bexp_lit(true) : r;
            if (rv && !*rv) return l;
            if (rv && *rv && total(l)) return bexp_lit(true);
            if (l == b->bl && r == b->br) return b;
            return bexp_or(l, r);
        }
    }
    return b;
}

namespace {

// precedence: 0 atom, higher binds looser
int aprec(const AExp& a) {
    if (a.kind != AExp::Kind::Bin) return 0;
    return (a.op == ArithOp::Mul || a.op == ArithOp::Div || a.op == ArithOp::Mod) ? 1 : 2;
}

void render_a(const AExpP& a, std::ostringstream& os, int ctx) {
    int p = aprec(*a);
    bool paren = p > ctx;
    if (paren) os << "(";
    switch (a->kind) {
        case AExp::Kind::Lit: os << a->lit; break;
        case AExp::Kind::Name: os << a->name.display(); break;
        case AExp::Kind::Bin:
            render_a(a->lhs, os, p);
            os << to_string(a->op);
            render_a(a->rhs, os, p - 1);
            break;
        case AExp::Kind::FunApp:
            os << a->fun.name.display();
            if (a->version >= 0) os << "@" << a->version;
            os << "(";
            render_a(a->index, os, 100);
            os << ")";
            break;
    }
    if (paren) os << ")";
}

// precedence: cmp/atoms 0, not 1, and 2, or 3
int bprec(const BExp& b) {
    switch (b.kind) {
        case BExp::Kind::Not: return 1;
        case BExp::Kind::And: return 2;
        case BExp::Kind::Or: return 3;
        default: return 0;
    }
}

void render_b(const BExpP& b, std::ostringstream& os, int ctx) {
    int p = bprec(*b);
    bool paren = p > ctx;
    if (paren) os << "(";
    switch (b->kind) {
        case BExp::Kind::Lit: os << (b->lit ? "tt" : "ff"); break;
        case BExp::Kind::Name: os << b->name.display(); break;
        case BExp::Kind::Cmp:
            render_a(b->al, os, 100);
            os << to_string(b->rel);
            render_a(b->ar, os, 100);
            break;
        case BExp::Kind::Not:
            os << "!";
            render_b(b->bl, os, 1);
            break;
        case BExp::Kind::And:
            render_b(b->bl, os, 2);
            os << " && ";
            render_b(b->br, os, 2);
            break;
        case BExp::Kind::Or:
            render_b(b->bl, os, 3);
            os << " || ";
            render_b(b->br, os, 3);
            break;
    }
    if (paren) os << ")";
}

}  // namespace

std::string render(const AExpP& a) {
    std::ostringstream os;
    render_a(a, os, 100);
    return os.str();
}

std::string render(const BExpP& b) {
    std::ostringstream os;
    render_b(b, os, 100);
    return os.str();
}

std::string render(const Exp& e) { return e.dtype == DType::Int ? render(e.a) : render(e.b); }

}  // namespace sgc
