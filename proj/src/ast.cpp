#include "sgc/ast.hpp"

#include <cctype>
#include <sstream>

namespace sgc {

std::string BaseType::display() const {
    switch (kind) {
        case Kind::Exp: return data == DType::Int ? "expint" : "expbool";
        case Kind::Com: return "com";
        case Kind::Var: return data == DType::Int ? "varint" : "varbool";
        case Kind::Arr: {
            std::string base = data == DType::Int ? "varint" : "varbool";
            return base + "[" + (sym_len ? "?" : std::to_string(len)) + "]";
        }
    }
    return "?";
}

bool type_equal(const BaseType& a, const BaseType& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == BaseType::Kind::Com) return true;
    if (a.data != b.data) return false;
    if (a.kind == BaseType::Kind::Arr)
        return a.sym_len == b.sym_len && (a.sym_len || a.len == b.len);
    return true;
}

std::string Type::display() const {
    std::string s;
    for (const auto& a : args) s += a.display() + " -> ";
    return s + ret.display();
}

bool type_equal(const Type& a, const Type& b) {
    if (a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!type_equal(a.args[i], b.args[i])) return false;
    return type_equal(a.ret, b.ret);
}

namespace {
TermP mk(Term t) { return std::make_shared<const Term>(std::move(t)); }
}  // namespace

TermP term_int(long long n) {
    Term t;
    t.kind = Term::Kind::IntLit;
    t.ilit = n;
    return mk(t);
}
TermP term_bool(bool b) {
    Term t;
    t.kind = Term::Kind::BoolLit;
    t.blit = b;
    return mk(t);
}
TermP term_skip() {
    Term t;
    t.kind = Term::Kind::Skip;
    return mk(t);
}
TermP term_abort() {
    Term t;
    t.kind = Term::Kind::Abort;
    return mk(t);
}
TermP term_ident(std::string n) {
    Term t;
    t.kind = Term::Kind::Ident;
    t.ident = std::move(n);
    return mk(t);
}
TermP term_lambda(std::string n, BaseType ty, TermP body) {
    Term t;
    t.kind = Term::Kind::Lambda;
    t.ident = std::move(n);
    t.btype = ty;
    t.t1 = std::move(body);
    return mk(t);
}
TermP term_app(TermP f, TermP a) {
    Term t;
    t.kind = Term::Kind::App;
    t.t1 = std::move(f);
    t.t2 = std::move(a);
    return mk(t);
}
TermP term_arith(ArithOp op, TermP l, TermP r) {
    Term t;
    t.kind = Term::Kind::Arith;
    t.aop = op;
    t.t1 = std::move(l);
    t.t2 = std::move(r);
    return mk(t);
}
TermP term_cmp(RelOp op, TermP l, TermP r) {
    Term t;
    t.kind = Term::Kind::Cmp;
    t.rop = op;
    t.t1 = std::move(l);
    t.t2 = std::move(r);
    return mk(t);
}
TermP term_not(TermP x) {
    Term t;
    t.kind = Term::Kind::Not;
    t.t1 = std::move(x);
    return mk(t);
}
TermP term_and(TermP l, TermP r) {
    Term t;
    t.kind = Term::Kind::And;
    t.t1 = std::move(l);
    t.t2 = std::move(r);
    return mk(t);
}
TermP term_or(TermP l, TermP r) {
    Term t;
    t.kind = Term::Kind::Or;
    t.t1 = std::move(l);
    t.t2 = std::move(r);
    return mk(t);
}
TermP term_seq(TermP l, TermP r) {
    Term t;
    t.kind = Term::Kind::Seq;
    t.t1 = std::move(l);
    t.t2 = std::move(r);
    return mk(t);
}
TermP term_assign(TermP v, TermP e) {
    Term t;
    t.kind = Term::Kind::Assign;
    t.t1 = std::move(v);
    t.t2 = std::move(e);
    return mk(t);
}
TermP term_deref(TermP v) {
    Term t;
    t.kind = Term::Kind::Deref;
    t.t1 = std::move(v);
    return mk(t);
}
TermP term_if(TermP c, TermP th, TermP el) {
    Term t;
    t.kind = Term::Kind::If;
    t.t1 = std::move(c);
    t.t2 = std::move(th);
    t.t3 = std::move(el);
    return mk(t);
}
TermP term_while(TermP c, TermP b) {
    Term t;
    t.kind = Term::Kind::While;
    t.t1 = std::move(c);
    t.t2 = std::move(b);
    return mk(t);
}
TermP term_newvar(DType d, std::string n, long long init, TermP body) {
    Term t;
    t.kind = Term::Kind::NewVar;
    t.data = d;
    t.ident = std::move(n);
    t.init = init;
    t.t1 = std::move(body);
    return mk(t);
}
TermP term_newarr(DType d, std::string n, long long len, long long init, TermP body) {
    Term t;
    t.kind = Term::Kind::NewVar;
    t.data = d;
    t.ident = std::move(n);
    t.is_array = true;
    t.arr_len = len;
    t.init = init;
    t.t1 = std::move(body);
    return mk(t);
}
TermP term_length(TermP arr) {
    Term t;
    t.kind = Term::Kind::Length;
    t.t1 = std::move(arr);
    return std::make_shared<const Term>(std::move(t));
}

TermP term_index(TermP arr, TermP ix) {
    Term t;
    t.kind = Term::Kind::Index;
    t.t1 = std::move(arr);
    t.t2 = std::move(ix);
    return mk(t);
}

const Type* Context::lookup(const std::string& n) const {
    // innermost binding wins (locals are appended)
    for (auto it = entries.rbegin(); it != entries.rend(); ++it)
        if (it->first == n) return &it->second;
    return nullptr;
}

std::string Context::display() const {
    std::string s;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i) s += ", ";
        s += entries[i].first + " : " + entries[i].second.display();
    }
    return s;
}

std::string Judgement::display() const {
    std::string c = ctx.display();
    return (c.empty() ? "" : c + " ") + "|- " + pretty(term) + " : " + type.display();
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok {
    End,
    Int,
    Ident,
    KwSkip,
    KwAbort,
    KwTrue,
    KwFalse,
    KwIf,
    KwThen,
    KwElse,
    KwWhile,
    KwDo,
    KwIn,
    KwNot,
    KwNewInt,
    KwNewBool,
    KwLengthof,
    Turnstile,  // |-
    Colon,
    Comma,
    Arrow,  // ->
    Dot,
    Lambda,  // backslash
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Question,
    Semi,
    AssignOp,  // :=
    Bang,      // !
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
};

struct Token {
    Tok kind;
    std::string text;
    long long num = 0;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : s_(src) { next(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        next();
        return t;
    }

  private:
    void next() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else if (c == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) {
            tok_.kind = Tok::End;
            tok_.text = "<end of input>";
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                advance();
            tok_.kind = Tok::Int;
            tok_.text = s_.substr(start, pos_ - start);
            tok_.num = std::stoll(tok_.text);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_' || s_[pos_] == '\''))
                advance();
            tok_.text = s_.substr(start, pos_ - start);
            if (tok_.text == "mkvar")
                throw ParseError("unsupported construct 'mkvar'", tok_.line, tok_.col);
            tok_.kind = keyword(tok_.text);
            return;
        }
        auto two = [&](char a, char b) {
            return c == a && pos_ + 1 < s_.size() && s_[pos_ + 1] == b;
        };
        if (two('|', '-')) return sym(Tok::Turnstile, 2);
        if (two('|', '|')) return sym(Tok::OrOr, 2);
        if (two('&', '&')) return sym(Tok::AndAnd, 2);
        if (two('-', '>')) return sym(Tok::Arrow, 2);
        if (two(':', '=')) return sym(Tok::AssignOp, 2);
        if (two('!', '=')) return sym(Tok::Ne, 2);
        if (two('<', '=')) return sym(Tok::Le, 2);
        if (two('>', '=')) return sym(Tok::Ge, 2);
        switch (c) {
            case ':': return sym(Tok::Colon, 1);
            case ',': return sym(Tok::Comma, 1);
            case '.': return sym(Tok::Dot, 1);
            case '\\': return sym(Tok::Lambda, 1);
            case '(': return sym(Tok::LParen, 1);
            case ')': return sym(Tok::RParen, 1);
            case '{': return sym(Tok::LBrace, 1);
            case '}': return sym(Tok::RBrace, 1);
            case '[': return sym(Tok::LBracket, 1);
            case ']': return sym(Tok::RBracket, 1);
            case '?': return sym(Tok::Question, 1);
            case ';': return sym(Tok::Semi, 1);
            case '!': return sym(Tok::Bang, 1);
            case '+': return sym(Tok::Plus, 1);
            case '-': return sym(Tok::Minus, 1);
            case '*': return sym(Tok::Star, 1);
            case '/': return sym(Tok::Slash, 1);
            case '%': return sym(Tok::Percent, 1);
            case '=': return sym(Tok::Eq, 1);
            case '<': return sym(Tok::Lt, 1);
            case '>': return sym(Tok::Gt, 1);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    static Tok keyword(const std::string& w) {
        if (w == "skip") return Tok::KwSkip;
        if (w == "abort") return Tok::KwAbort;
        if (w == "tt" || w == "true") return Tok::KwTrue;
        if (w == "ff" || w == "false") return Tok::KwFalse;
        if (w == "if") return Tok::KwIf;
        if (w == "then") return Tok::KwThen;
        if (w == "else") return Tok::KwElse;
        if (w == "while") return Tok::KwWhile;
        if (w == "do") return Tok::KwDo;
        if (w == "in") return Tok::KwIn;
        if (w == "not") return Tok::KwNot;
        if (w == "new_int") return Tok::KwNewInt;
        if (w == "new_bool") return Tok::KwNewBool;
        if (w == "lengthof") return Tok::KwLengthof;
        return Tok::Ident;
    }

    void advance() {
        ++pos_;
        ++col_;
    }

    void sym(Tok k, int n) {
        tok_.kind = k;
        tok_.text = s_.substr(pos_, n);
        for (int i = 0; i < n; ++i) advance();
    }

    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// --------------------------------------------------------------- parser

class Parser {
  public:
    explicit Parser(const std::string& src) : lx_(src) {}

    Judgement judgement() {
        Judgement j;
        // an identifier followed by ':' starts a context entry
        if (lx_.peek().kind != Tok::Turnstile) j.ctx = context();
        expect(Tok::Turnstile, "'|-'");
        j.term = seq();
        expect(Tok::Colon, "':'");
        j.type = type();
        expect(Tok::End, "end of input");
        return j;
    }

    TermP bare_term() {
        TermP t = seq();
        expect(Tok::End, "end of input");
        return t;
    }

  private:
    Context context() {
        Context c;
        while (true) {
            Token n = lx_.take();
            // `abort` is a keyword in terms but a legal context name
            if (n.kind == Tok::KwAbort)
                n.text = "abort";
            else if (n.kind != Tok::Ident)
                throw ParseError("expected identifier, found '" + n.text + "'", n.line, n.col);
            // array declarations: either `x[len] : varint` or `x : varint[len]`
            bool decl_len = false, decl_sym = false;
            long long decl_n = 0;
            if (lx_.peek().kind == Tok::LBracket) {
                lx_.take();
                decl_len = true;
                if (lx_.peek().kind == Tok::Question) {
                    lx_.take();
                    decl_sym = true;
                } else {
                    Token ln = expect(Tok::Int, "array length or '?'");
                    if (ln.num <= 0)
                        throw ParseError("array length must be positive", ln.line, ln.col);
                    decl_n = ln.num;
                }
                expect(Tok::RBracket, "']'");
            }
            expect(Tok::Colon, "':'");
            for (const auto& [prev, ty] : c.entries)
                if (prev == n.text)
                    throw ParseError("duplicate identifier '" + n.text + "' in context", n.line,
                                     n.col);
            Type ty = type();
            if (decl_len) {
                if (!ty.is_base() || ty.ret.kind != BaseType::Kind::Var || ty.ret.len != 0 ||
                    ty.ret.sym_len)
                    throw ParseError("'" + n.text + "[...]' requires type varint or varbool",
                                     n.line, n.col);
                ty.ret.kind = BaseType::Kind::Arr;
                ty.ret.sym_len = decl_sym;
                ty.ret.len = decl_n;
            }
            c.entries.push_back({n.text, ty});
            if (lx_.peek().kind == Tok::Comma)
                lx_.take();
            else
                break;
        }
        return c;
    }

    Type type() {
        Type t;
        t.ret = base_type();
        while (lx_.peek().kind == Tok::Arrow) {
            lx_.take();
            t.args.push_back(t.ret);
            t.ret = base_type();
        }
        return t;
    }

    BaseType base_type() {
        Token w = expect(Tok::Ident, "type name");
        BaseType b;
        if (w.text == "com") {
            b.kind = BaseType::Kind::Com;
            return b;
        }
        if (w.text == "expint" || w.text == "expbool") {
            b.kind = BaseType::Kind::Exp;
            b.data = w.text == "expint" ? DType::Int : DType::Bool;
            return b;
        }
        if (w.text == "varint" || w.text == "varbool") {
            b.kind = BaseType::Kind::Var;
            b.data = w.text == "varint" ? DType::Int : DType::Bool;
            if (lx_.peek().kind == Tok::LBracket) {
                lx_.take();
                b.kind = BaseType::Kind::Arr;
                if (lx_.peek().kind == Tok::Question) {
                    lx_.take();
                    b.sym_len = true;
                } else {
                    Token n = expect(Tok::Int, "array length or '?'");
                    if (n.num <= 0) throw ParseError("array length must be positive", n.line, n.col);
                    b.len = n.num;
                }
                expect(Tok::RBracket, "']'");
            }
            return b;
        }
        throw ParseError("unknown type '" + w.text + "'", w.line, w.col);
    }

    static bool starts_term(Tok k) {
        switch (k) {
            case Tok::Int:
            case Tok::Ident:
            case Tok::KwSkip:
            case Tok::KwAbort:
            case Tok::KwTrue:
            case Tok::KwFalse:
            case Tok::KwIf:
            case Tok::KwWhile:
            case Tok::KwNot:
            case Tok::KwNewInt:
            case Tok::KwNewBool:
            case Tok::KwLengthof:
            case Tok::Lambda:
            case Tok::LParen:
            case Tok::LBrace:
            case Tok::Bang:
            case Tok::Minus: return true;
            default: return false;
        }
    }

    TermP seq() {
        TermP t = stmt();
        while (lx_.peek().kind == Tok::Semi) {
            lx_.take();
            if (!starts_term(lx_.peek().kind)) break;  // trailing ';'
            t = term_seq(t, stmt());
        }
        return t;
    }

    TermP stmt() {
        Tok k = lx_.peek().kind;
        if (k == Tok::KwIf) {
            lx_.take();
            TermP c = or_expr();
            expect(Tok::KwThen, "'then'");
            TermP th = stmt();
            TermP el = term_skip();
            if (lx_.peek().kind == Tok::KwElse) {
                lx_.take();
                el = stmt();
            }
            return term_if(c, th, el);
        }
        if (k == Tok::KwWhile) {
            lx_.take();
            TermP c = or_expr();
            expect(Tok::KwDo, "'do'");
            return term_while(c, stmt());
        }
        if (k == Tok::KwNewInt || k == Tok::KwNewBool) {
            DType d = k == Tok::KwNewInt ? DType::Int : DType::Bool;
            lx_.take();
            Token n = expect(Tok::Ident, "identifier");
            bool arr = false;
            long long len = 0;
            if (lx_.peek().kind == Tok::LBracket) {
                lx_.take();
                Token ln = expect(Tok::Int, "array length");
                if (ln.num <= 0)
                    throw ParseError("array length must be positive", ln.line, ln.col);
                len = ln.num;
                arr = true;
                expect(Tok::RBracket, "']'");
            }
            expect(Tok::AssignOp, "':='");
            TermP init = atom();
            long long iv;
            if (init->kind == Term::Kind::IntLit && d == DType::Int)
                iv = init->ilit;
            else if (init->kind == Term::Kind::BoolLit && d == DType::Bool)
                iv = init->blit ? 1 : 0;
            else
                throw ParseError("initializer must be a literal of the declared type",
                                 lx_.peek().line, lx_.peek().col);
            expect(Tok::KwIn, "'in'");
            TermP body = seq();
            return arr ? term_newarr(d, n.text, len, iv, body)
                       : term_newvar(d, n.text, iv, body);
        }
        if (k == Tok::Lambda) {
            lx_.take();
            Token n = expect(Tok::Ident, "identifier");
            expect(Tok::Colon, "':'");
            BaseType b = base_type();
            expect(Tok::Dot, "'.'");
            return term_lambda(n.text, b, seq());
        }
        TermP t = or_expr();
        if (lx_.peek().kind == Tok::AssignOp) {
            lx_.take();
            return term_assign(t, or_expr());
        }
        return t;
    }

    TermP or_expr() {
        TermP t = and_expr();
        while (lx_.peek().kind == Tok::OrOr) {
            lx_.take();
            t = term_or(t, and_expr());
        }
        return t;
    }

    TermP and_expr() {
        TermP t = not_expr();
        while (lx_.peek().kind == Tok::AndAnd) {
            lx_.take();
            t = term_and(t, not_expr());
        }
        return t;
    }

    TermP not_expr() {
        if (lx_.peek().kind == Tok::KwNot) {
            lx_.take();
            return term_not(not_expr());
        }
        return cmp_expr();
    }

    TermP cmp_expr() {
        TermP t = add_expr();
        RelOp op;
        switch (lx_.peek().kind) {
            case Tok::Eq: op = RelOp::Eq; break;
            case Tok::Ne: op = RelOp::Ne; break;
            case Tok::Lt: op = RelOp::Lt; break;
            case Tok::Le: op = RelOp::Le; break;
            case Tok::Gt: op = RelOp::Gt; break;
            case Tok::Ge: op = RelOp::Ge; break;
            default: return t;
        }
        lx_.take();
        return term_cmp(op, t, add_expr());
    }

    TermP add_expr() {
        TermP t = mul_expr();
        while (true) {
            Tok k = lx_.peek().kind;
            if (k == Tok::Plus) {
                lx_.take();
                t = term_arith(ArithOp::Add, t, mul_expr());
            } else if (k == Tok::Minus) {
                lx_.take();
                t = term_arith(ArithOp::Sub, t, mul_expr());
            } else {
                return t;
            }
        }
    }

    TermP mul_expr() {
        TermP t = unary();
        while (true) {
            Tok k = lx_.peek().kind;
            ArithOp op;
            if (k == Tok::Star)
                op = ArithOp::Mul;
            else if (k == Tok::Slash)
                op = ArithOp::Div;
            else if (k == Tok::Percent)
                op = ArithOp::Mod;
            else
                return t;
            lx_.take();
            t = term_arith(op, t, unary());
        }
    }

    TermP unary() {
        Tok k = lx_.peek().kind;
        if (k == Tok::Bang) {
            lx_.take();
            return term_deref(unary());
        }
        if (k == Tok::KwLengthof) {
            lx_.take();
            return term_length(postfix());
        }
        if (k == Tok::Minus) {
            Token m = lx_.take();
            TermP t = unary();
            if (t->kind == Term::Kind::IntLit) return term_int(-t->ilit);
            return term_arith(ArithOp::Sub, term_int(0), t);
        }
        return app();
    }

    TermP app() {
        TermP t = postfix();
        // juxtaposition binds only atoms (and their indexings)
        while (true) {
            Tok k = lx_.peek().kind;
            if (k == Tok::Int || k == Tok::Ident || k == Tok::KwSkip || k == Tok::KwAbort ||
                k == Tok::KwTrue || k == Tok::KwFalse || k == Tok::LParen || k == Tok::LBrace ||
                k == Tok::Bang)
                t = term_app(t, k == Tok::Bang ? unary() : postfix());
            else
                return t;
        }
    }

    TermP postfix() {
        TermP t = atom();
        while (lx_.peek().kind == Tok::LBracket) {
            lx_.take();
            TermP ix = or_expr();
            expect(Tok::RBracket, "']'");
            t = term_index(t, ix);
        }
        return t;
    }

    TermP atom() {
        Token t = lx_.take();
        switch (t.kind) {
            case Tok::Int: return term_int(t.num);
            case Tok::KwTrue: return term_bool(true);
            case Tok::KwFalse: return term_bool(false);
            case Tok::KwSkip: return term_skip();
            case Tok::KwAbort: return term_abort();
            case Tok::Ident: return term_ident(t.text);
            case Tok::LParen: {
                TermP inner = seq();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::LBrace: {
                TermP inner = seq();
                expect(Tok::RBrace, "'}'");
                return inner;
            }
            default:
                throw ParseError("unexpected token '" + t.text + "'", t.line, t.col);
        }
    }

    Token expect(Tok k, const std::string& what) {
        Token t = lx_.take();
        if (t.kind != k)
            throw ParseError("expected " + what + ", found '" + t.text + "'", t.line, t.col);
        return t;
    }

    Lexer lx_;
};

}  // namespace

Judgement parse_judgement(const std::string& src) { return Parser(src).judgement(); }
TermP parse_term(const std::string& src) { return Parser(src).bare_term(); }

// ------------------------------------------------------- pretty printer

namespace {

// precedence levels, mirroring the parser (higher binds tighter)
enum { P_SEQ = 0, P_STMT, P_OR, P_AND, P_NOT, P_CMP, P_ADD, P_MUL, P_UNARY, P_APP, P_ATOM };

void pp(std::ostream& os, const TermP& t, int prec);

void paren(std::ostream& os, const TermP& t, int prec, int mine) {
    if (mine < prec) {
        os << "(";
        pp(os, t, P_SEQ);
        os << ")";
    } else {
        pp(os, t, mine);
    }
}

void pp(std::ostream& os, const TermP& t, int prec) {
    switch (t->kind) {
        case Term::Kind::IntLit: os << t->ilit; break;
        case Term::Kind::BoolLit: os << (t->blit ? "tt" : "ff"); break;
        case Term::Kind::Skip: os << "skip"; break;
        case Term::Kind::Abort: os << "abort"; break;
        case Term::Kind::Ident: os << t->ident; break;
        case Term::Kind::Lambda:
            if (P_STMT < prec) os << "(";
            os << "\\" << t->ident << " : " << t->btype.display() << ". ";
            pp(os, t->t1, P_SEQ);
            if (P_STMT < prec) os << ")";
            break;
        case Term::Kind::App:
            paren(os, t->t1, prec, P_APP);
            os << " ";
            paren(os, t->t2, prec == P_ATOM ? P_ATOM : P_ATOM, P_ATOM);
            break;
        case Term::Kind::Arith: {
            int mine = (t->aop == ArithOp::Add || t->aop == ArithOp::Sub) ? P_ADD : P_MUL;
            if (mine < prec) os << "(";
            pp(os, t->t1, mine);
            os << " " << to_string(t->aop) << " ";
            pp(os, t->t2, mine + 1);
            if (mine < prec) os << ")";
            break;
        }
        case Term::Kind::Cmp:
            if (P_CMP < prec) os << "(";
            pp(os, t->t1, P_ADD);
            os << " " << to_string(t->rop) << " ";
            pp(os, t->t2, P_ADD);
            if (P_CMP < prec) os << ")";
            break;
        case Term::Kind::Not:
            if (P_NOT < prec) os << "(";
            os << "not ";
            pp(os, t->t1, P_NOT);
            if (P_NOT < prec) os << ")";
            break;
        case Term::Kind::And:
            if (P_AND < prec) os << "(";
            pp(os, t->t1, P_AND);
            os << " && ";
            pp(os, t->t2, P_NOT);
            if (P_AND < prec) os << ")";
            break;
        case Term::Kind::Or:
            if (P_OR < prec) os << "(";
            pp(os, t->t1, P_OR);
            os << " || ";
            pp(os, t->t2, P_AND);
            if (P_OR < prec) os << ")";
            break;
        case Term::Kind::Seq:
            if (P_SEQ < prec) os << "{ ";
            pp(os, t->t1, P_STMT);
            os << "; ";
            pp(os, t->t2, P_SEQ);
            if (P_SEQ < prec) os << " }";
            break;
        case Term::Kind::Assign:
            if (P_STMT < prec) os << "(";
            pp(os, t->t1, P_OR);
            os << " := ";
            pp(os, t->t2, P_OR);
            if (P_STMT < prec) os << ")";
            break;
        case Term::Kind::Deref:
            if (P_UNARY < prec) os << "(";
            os << "!";
            pp(os, t->t1, P_UNARY);
            if (P_UNARY < prec) os << ")";
            break;
        case Term::Kind::If:
            if (P_STMT < prec) os << "(";
            os << "if ";
            pp(os, t->t1, P_OR);
            os << " then ";
            pp(os, t->t2, P_STMT);
            if (t->t3->kind != Term::Kind::Skip) {
                os << " else ";
                pp(os, t->t3, P_STMT);
            }
            if (P_STMT < prec) os << ")";
            break;
        case Term::Kind::While:
            if (P_STMT < prec) os << "(";
            os << "while ";
            pp(os, t->t1, P_OR);
            os << " do ";
            pp(os, t->t2, P_STMT);
            if (P_STMT < prec) os << ")";
            break;
        case Term::Kind::NewVar:
            if (P_STMT < prec) os << "(";
            os << (t->data == DType::Int ? "new_int " : "new_bool ") << t->ident;
            if (t->is_array) os << "[" << t->arr_len << "]";
            os << " := ";
            if (t->data == DType::Int)
                os << t->init;
            else
                os << (t->init ? "tt" : "ff");
            os << " in ";
            pp(os, t->t1, P_SEQ);
            if (P_STMT < prec) os << ")";
            break;
        case Term::Kind::Length:
            if (P_UNARY < prec) os << "(";
            os << "lengthof ";
            paren(os, t->t1, P_ATOM, P_ATOM);
            if (P_UNARY < prec) os << ")";
            break;
        case Term::Kind::Index:
            paren(os, t->t1, prec, P_ATOM);
            os << "[";
            pp(os, t->t2, P_SEQ);
            os << "]";
            break;
    }
}

}  // namespace

std::string pretty(const TermP& t) {
    std::ostringstream os;
    pp(os, t, P_SEQ);
    return os.str();
}

// ----------------------------------------------------------- typechecker

namespace {

Type base(BaseType b) { return Type{{}, b}; }

BaseType bt_exp(DType d) { return BaseType{BaseType::Kind::Exp, d, false, 0}; }
BaseType bt_com() { return BaseType{BaseType::Kind::Com, DType::Int, false, 0}; }
BaseType bt_var(DType d) { return BaseType{BaseType::Kind::Var, d, false, 0}; }

Type tc(std::vector<std::pair<std::string, Type>>& env, const TermP& t) {
    auto want = [&](const TermP& u, const BaseType& b, const char* where) {
        Type ty = tc(env, u);
        if (!ty.is_base() || !type_equal(ty.ret, b))
            throw TypeError(std::string(where) + ": expected " + b.display() + ", found " +
                            ty.display() + " in '" + pretty(u) + "'");
        return ty;
    };
    switch (t->kind) {
        case Term::Kind::IntLit: return base(bt_exp(DType::Int));
        case Term::Kind::BoolLit: return base(bt_exp(DType::Bool));
        case Term::Kind::Skip:
        case Term::Kind::Abort: return base(bt_com());
        case Term::Kind::Ident: {
            for (auto it = env.rbegin(); it != env.rend(); ++it)
                if (it->first == t->ident) return it->second;
            throw TypeError("unbound identifier '" + t->ident + "'");
        }
        case Term::Kind::Lambda: {
            env.push_back({t->ident, base(t->btype)});
            Type body = tc(env, t->t1);
            env.pop_back();
            Type out;
            out.args.push_back(t->btype);
            out.args.insert(out.args.end(), body.args.begin(), body.args.end());
            out.ret = body.ret;
            return out;
        }
        case Term::Kind::App: {
            Type f = tc(env, t->t1);
            if (f.is_base())
                throw TypeError("cannot apply non-function '" + pretty(t->t1) + "' of type " +
                                f.display());
            want(t->t2, f.args.front(), "application argument");
            Type out;
            out.args.assign(f.args.begin() + 1, f.args.end());
            out.ret = f.ret;
            return out;
        }
        case Term::Kind::Arith:
            want(t->t1, bt_exp(DType::Int), "arithmetic operand");
            want(t->t2, bt_exp(DType::Int), "arithmetic operand");
            return base(bt_exp(DType::Int));
        case Term::Kind::Cmp:
            want(t->t1, bt_exp(DType::Int), "comparison operand");
            want(t->t2, bt_exp(DType::Int), "comparison operand");
            return base(bt_exp(DType::Bool));
        case Term::Kind::Not:
            want(t->t1, bt_exp(DType::Bool), "negation operand");
            return base(bt_exp(DType::Bool));
        case Term::Kind::And:
        case Term::Kind::Or:
            want(t->t1, bt_exp(DType::Bool), "boolean operand");
            want(t->t2, bt_exp(DType::Bool), "boolean operand");
            return base(bt_exp(DType::Bool));
        case Term::Kind::Seq:
            want(t->t1, bt_com(), "sequence");
            want(t->t2, bt_com(), "sequence");
            return base(bt_com());
        case Term::Kind::Assign: {
            Type v = tc(env, t->t1);
            if (!v.is_base() || v.ret.kind != BaseType::Kind::Var)
                throw TypeError("assignment target must be a variable, found " + v.display() +
                                " in '" + pretty(t->t1) + "'");
            want(t->t2, bt_exp(v.ret.data), "assigned value");
            return base(bt_com());
        }
        case Term::Kind::Deref: {
            Type v = tc(env, t->t1);
            if (!v.is_base() || v.ret.kind != BaseType::Kind::Var)
                throw TypeError("dereference target must be a variable, found " + v.display() +
                                " in '" + pretty(t->t1) + "'");
            return base(bt_exp(v.ret.data));
        }
        case Term::Kind::If:
            want(t->t1, bt_exp(DType::Bool), "condition");
            want(t->t2, bt_com(), "branch");
            want(t->t3, bt_com(), "branch");
            return base(bt_com());
        case Term::Kind::While:
            want(t->t1, bt_exp(DType::Bool), "loop condition");
            want(t->t2, bt_com(), "loop body");
            return base(bt_com());
        case Term::Kind::NewVar: {
            BaseType b;
            if (t->is_array) {
                b.kind = BaseType::Kind::Arr;
                b.data = t->data;
                b.len = t->arr_len;
            } else {
                b = bt_var(t->data);
            }
            env.push_back({t->ident, base(b)});
            want(t->t1, bt_com(), "new-variable body");
            env.pop_back();
            return base(bt_com());
        }
        case Term::Kind::Index: {
            Type a = tc(env, t->t1);
            if (!a.is_base() || a.ret.kind != BaseType::Kind::Arr)
                throw TypeError("indexing requires an array, found " + a.display() + " in '" +
                                pretty(t->t1) + "'");
            want(t->t2, bt_exp(DType::Int), "array index");
            return base(bt_var(a.ret.data));
        }
        case Term::Kind::Length: {
            Type a = tc(env, t->t1);
            if (!a.is_base() || a.ret.kind != BaseType::Kind::Arr)
                throw TypeError("lengthof requires an array, found " + a.display() + " in '" +
                                pretty(t->t1) + "'");
            return base(bt_exp(DType::Int));
        }
    }
    throw TypeError("malformed term");
}

}  // namespace

Type typecheck(const Context& ctx, const TermP& t) {
    auto env = ctx.entries;
    return tc(env, t);
}

void typecheck(const Judgement& j) {
    Type inferred = typecheck(j.ctx, j.term);
    if (!type_equal(inferred, j.type))
        throw TypeError("declared type " + j.type.display() + " does not match inferred type " +
                        inferred.display());
}

// ------------------------------------------------------ beta reduction

namespace {

void free_idents(const TermP& t, std::vector<std::string>& out) {
    if (!t) return;
    if (t->kind == Term::Kind::Ident) {
        out.push_back(t->ident);
        return;
    }
    if (t->kind == Term::Kind::Lambda || t->kind == Term::Kind::NewVar) {
        std::vector<std::string> inner;
        free_idents(t->t1, inner);
        for (auto& n : inner)
            if (n != t->ident) out.push_back(n);
        if (t->kind == Term::Kind::NewVar) return;
        free_idents(t->t2, out);
        free_idents(t->t3, out);
        return;
    }
    free_idents(t->t1, out);
    free_idents(t->t2, out);
    free_idents(t->t3, out);
}

bool is_free(const TermP& t, const std::string& n) {
    std::vector<std::string> fv;
    free_idents(t, fv);
    for (auto& x : fv)
        if (x == n) return true;
    return false;
}

TermP subst(const TermP& t, const std::string& n, const TermP& v, int& fresh);

TermP rebind(const Term& node, const std::string& n, const TermP& v, int& fresh) {
    // capture-avoiding handling of the binder in `node` (Lambda or NewVar)
    Term out = node;
    std::string bound = node.ident;
    TermP body = node.t1;
    if (bound != n) {
        if (is_free(v, bound)) {
            std::string renamed = bound + "_" + std::to_string(++fresh);
            body = subst(body, bound, term_ident(renamed), fresh);
            out.ident = renamed;
        }
        body = subst(body, n, v, fresh);
    }
    out.t1 = body;
    return std::make_shared<const Term>(std::move(out));
}

TermP subst(const TermP& t, const std::string& n, const TermP& v, int& fresh) {
    if (!t) return t;
    switch (t->kind) {
        case Term::Kind::Ident: return t->ident == n ? v : t;
        case Term::Kind::Lambda:
        case Term::Kind::NewVar: return rebind(*t, n, v, fresh);
        default: {
            Term out = *t;
            out.t1 = subst(t->t1, n, v, fresh);
            out.t2 = subst(t->t2, n, v, fresh);
            out.t3 = subst(t->t3, n, v, fresh);
            return std::make_shared<const Term>(std::move(out));
        }
    }
}

TermP normalize(const TermP& t, int& fresh) {
    if (!t) return t;
    if (t->kind == Term::Kind::App) {
        TermP f = normalize(t->t1, fresh);
        TermP a = normalize(t->t2, fresh);
        if (f->kind == Term::Kind::Lambda)
            return normalize(subst(f->t1, f->ident, a, fresh), fresh);
        return term_app(f, a);
    }
    Term out = *t;
    out.t1 = normalize(t->t1, fresh);
    out.t2 = normalize(t->t2, fresh);
    out.t3 = normalize(t->t3, fresh);
    return std::make_shared<const Term>(std::move(out));
}

}  // namespace

TermP beta_normalize(const TermP& t) {
    int fresh = 0;
    return normalize(t, fresh);
}

}  // namespace sgc
