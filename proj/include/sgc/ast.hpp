#ifndef SGC_AST_HPP
#define SGC_AST_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgc/expr.hpp"

namespace sgc {

/// Base types: expD, com, varD, and varD[k] arrays (k concrete or symbolic).
struct BaseType {
    enum class Kind { Exp, Com, Var, Arr };
    Kind kind = Kind::Com;
    DType data = DType::Int;  // Exp / Var / Arr
    bool sym_len = false;     // Arr: length left symbolic ("?")
    long long len = 0;        // Arr with concrete length

    std::string display() const;
};

bool type_equal(const BaseType& a, const BaseType& b);

/// Second-order types: base-type arguments, base-type result.
struct Type {
    std::vector<BaseType> args;
    BaseType ret;

    bool is_base() const { return args.empty(); }
    std::string display() const;
};

bool type_equal(const Type& a, const Type& b);

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
    enum class Kind {
        IntLit,
        BoolLit,
        Skip,
        Abort,
        Ident,
        Lambda,  // \ident : btype . t1
        App,     // t1 t2
        Arith,   // t1 aop t2
        Cmp,     // t1 rop t2
        Not,
        And,
        Or,
        Seq,     // t1 ; t2
        Assign,  // t1 := t2
        Deref,   // !t1
        If,      // if t1 then t2 else t3
        While,   // while t1 do t2
        NewVar,  // new_D ident[arr_len]? := init in t1
        Index,   // t1[t2]
        Length,  // lengthof t1 (t1 an array identifier)
    };
    Kind kind = Kind::Skip;
    long long ilit = 0;
    bool blit = false;
    std::string ident;
    BaseType btype;  // Lambda parameter type
    ArithOp aop = ArithOp::Add;
    RelOp rop = RelOp::Eq;
    TermP t1, t2, t3;
    DType data = DType::Int;  // NewVar
    bool is_array = false;    // NewVar
    long long arr_len = 0;    // NewVar array
    long long init = 0;       // NewVar initial value (bools: 0/1)
};

TermP term_int(long long n);
TermP term_bool(bool b);
TermP term_skip();
TermP term_abort();
TermP term_ident(std::string n);
TermP term_lambda(std::string n, BaseType t, TermP body);
TermP term_app(TermP f, TermP a);
TermP term_arith(ArithOp op, TermP l, TermP r);
TermP term_cmp(RelOp op, TermP l, TermP r);
TermP term_not(TermP t);
TermP term_and(TermP l, TermP r);
TermP term_or(TermP l, TermP r);
TermP term_seq(TermP l, TermP r);
TermP term_assign(TermP v, TermP e);
TermP term_deref(TermP v);
TermP term_if(TermP c, TermP t, TermP e);
TermP term_while(TermP c, TermP b);
TermP term_newvar(DType d, std::string n, long long init, TermP body);
TermP term_newarr(DType d, std::string n, long long len, long long init, TermP body);
TermP term_index(TermP arr, TermP ix);
TermP term_length(TermP arr);

/// Typing context: identifier -> type, in declaration order.
struct Context {
    std::vector<std::pair<std::string, Type>> entries;

    const Type* lookup(const std::string& n) const;
    std::string display() const;
};

struct Judgement {
    Context ctx;
    TermP term;
    Type type;

    std::string display() const;
};

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                             std::to_string(col_)),
          line(line_),
          col(col_) {}
};

struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "ctx |- term : type" (the context may be empty).
Judgement parse_judgement(const std::string& src);
/// Parses a bare term with no context or type ascription.
TermP parse_term(const std::string& src);

std::string pretty(const TermP& t);

/// Infers the type of t; throws TypeError on ill-typed terms.
Type typecheck(const Context& ctx, const TermP& t);
/// Checks the judgement's claimed type against the inferred one.
void typecheck(const Judgement& j);

/// Contracts all beta redexes; recursion-free terms normalize. The result
/// contains lambdas only where they cannot be applied (e.g. at top level).
TermP beta_normalize(const TermP& t);

}  // namespace sgc

#endif
