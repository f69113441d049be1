#ifndef SGC_EXPR_HPP
#define SGC_EXPR_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgc {

enum class DType { Int, Bool };

std::string to_string(DType d);

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A symbolic name X_i. Identity is (index, dtype); the hint is cosmetic
/// and only affects rendering.
struct SymName {
    int index = 0;
    DType dtype = DType::Int;
    std::string hint;  // display name, e.g. "X", "I", "k"; empty -> "X<index>"

    friend bool operator==(const SymName& a, const SymName& b) {
        return a.index == b.index && a.dtype == b.dtype;
    }
    friend bool operator!=(const SymName& a, const SymName& b) { return !(a == b); }
    friend bool operator<(const SymName& a, const SymName& b) {
        if (a.index != b.index) return a.index < b.index;
        return static_cast<int>(a.dtype) < static_cast<int>(b.dtype);
    }
    std::string display() const;
};

/// Allocates minimal-index fresh names from the enumeration X1, X2, ...
/// Indices are unique across both data types so rendered names never clash.
class NamePool {
  public:
    SymName fresh(DType dtype, const std::string& hint = "");
    bool used(int index) const { return used_.count(index) > 0; }

  private:
    std::set<int> used_;
    std::map<std::string, int> hint_counts_;
};

enum class ArithOp { Add, Sub, Mul, Div, Mod };
enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string to_string(ArithOp op);
std::string to_string(RelOp op);

/// Function symbol standing for an array tracker (int -> elem).
struct FunSym {
    SymName name;      // dtype = element type
    friend bool operator==(const FunSym& a, const FunSym& b) { return a.name == b.name; }
    friend bool operator<(const FunSym& a, const FunSym& b) { return a.name < b.name; }
};

struct AExp;
struct BExp;
using AExpP = std::shared_ptr<const AExp>;
using BExpP = std::shared_ptr<const BExp>;

/// Arithmetic expressions: a ::= n | X | a op a | F[ver](a)
struct AExp {
    enum class Kind { Lit, Name, Bin, FunApp };
    Kind kind;
    long long lit = 0;
    SymName name;
    ArithOp op = ArithOp::Add;
    AExpP lhs, rhs;
    FunSym fun;        // FunApp
    int version = -1;  // FunApp: update-chain version; -1 = current (pre-instantiation)
    AExpP index;
};

/// Boolean expressions: b ::= tt | ff | X | a rel a | !b | b && b | b || b
struct BExp {
    enum class Kind { Lit, Name, Cmp, Not, And, Or };
    Kind kind;
    bool lit = false;
    SymName name;
    RelOp rel = RelOp::Eq;
    AExpP al, ar;
    BExpP bl, br;
};

AExpP aexp_lit(long long n);
AExpP aexp_name(SymName x);
AExpP aexp_bin(ArithOp op, AExpP l, AExpP r);
AExpP aexp_funapp(FunSym f, AExpP index, int version = -1);

BExpP bexp_lit(bool v);
BExpP bexp_name(SymName x);
BExpP bexp_cmp(RelOp rel, AExpP l, AExpP r);
BExpP bexp_not(BExpP b);
BExpP bexp_and(BExpP l, BExpP r);
BExpP bexp_or(BExpP l, BExpP r);

/// Either an arithmetic or a boolean expression (a move payload).
struct Exp {
    DType dtype = DType::Int;
    AExpP a;  // set when dtype == Int
    BExpP b;  // set when dtype == Bool
};

Exp exp_of(AExpP a);
Exp exp_of(BExpP b);
Exp exp_of_name(SymName x);

struct Value {
    DType dtype = DType::Int;
    long long i = 0;
    bool b = false;

    static Value of_int(long long v) { return {DType::Int, v, false}; }
    static Value of_bool(bool v) { return {DType::Bool, 0, v}; }
    friend bool operator==(const Value& x, const Value& y) {
        return x.dtype == y.dtype && (x.dtype == DType::Int ? x.i == y.i : x.b == y.b);
    }
    std::string display() const;
};

/// Finite-map view of an array function symbol under an evaluation.
struct ArrayValue {
    Value def;
    std::map<long long, Value> entries;

    Value at(long long i) const {
        auto it = entries.find(i);
        return it == entries.end() ? def : it->second;
    }
};

/// Total map from symbolic names to concrete values.
struct Evaluation {
    std::map<SymName, Value> names;
    // keyed by (function symbol, chain version)
    std::map<std::pair<SymName, int>, ArrayValue> arrays;

    Value get(const SymName& x) const;
};

long long evaluate(const AExpP& a, const Evaluation& rho);
bool evaluate(const BExpP& b, const Evaluation& rho);
Value evaluate(const Exp& e, const Evaluation& rho);

void collect_names(const AExpP& a, std::set<SymName>& out);
void collect_names(const BExpP& b, std::set<SymName>& out);

/// First-appearance-ordered collection of names, including array function
/// symbols (left to right, outside in).
void collect_names_ordered(const AExpP& a, std::vector<SymName>& order,
                           std::set<SymName>& seen);
void collect_names_ordered(const BExpP& b, std::vector<SymName>& order,
                           std::set<SymName>& seen);
void collect_names_ordered(const Exp& e, std::vector<SymName>& order,
                           std::set<SymName>& seen);

/// Replaces display hints of names whose index is in the map; identity
/// (index, dtype) is untouched.
SymName rename_hints(SymName n, const std::map<int, std::string>& hints);
AExpP rename_hints(const AExpP& a, const std::map<int, std::string>& hints);
BExpP rename_hints(const BExpP& b, const std::map<int, std::string>& hints);
Exp rename_hints(const Exp& e, const std::map<int, std::string>& hints);

bool exp_equal(const AExpP& a, const AExpP& b);
bool exp_equal(const BExpP& a, const BExpP& b);
bool exp_equal(const Exp& a, const Exp& b);

/// Rewrites names by the given map; names absent from the map are kept.
AExpP rewrite(const AExpP& a, const std::map<SymName, Exp>& subst);
BExpP rewrite(const BExpP& b, const std::map<SymName, Exp>& subst);
Exp rewrite(const Exp& e, const std::map<SymName, Exp>& subst);

/// Constant folding; returns a possibly simpler expression.
AExpP fold(const AExpP& a);
BExpP fold(const BExpP& b);

std::optional<long long> as_literal(const AExpP& a);
std::optional<bool> as_literal(const BExpP& b);

std::string render(const AExpP& a);
std::string render(const BExpP& b);
std::string render(const Exp& e);

}  // namespace sgc

#endif
