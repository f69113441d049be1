// Minimal reference SMT-LIB2 solver for the scalar linear fragment the
// tool emits: declare-const Int/Bool, assert over +,-,*,div,mod,=,<,<=,
// >,>=,distinct,not,and,or,ite. Answers sat with a model found by bounded
// backtracking over [-box, box], or unknown when the box is exhausted or
// the input uses unsupported features (arrays, quantifiers). Exists so the
// external-backend bridge can be tested without a full SMT solver.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr long long kBox = 24;

struct Node {
    std::string atom;  // empty for lists
    std::vector<Node> kids;
    bool is_atom() const { return kids.empty() && !atom.empty(); }
};

struct ParseFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == ';') {
            while (i < s.size() && s[i] != '\n') ++i;
        } else if (isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back(std::string(1, c));
            ++i;
        } else {
            size_t j = i;
            while (j < s.size() && !isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
                   s[j] != ')' && s[j] != ';')
                ++j;
            out.push_back(s.substr(i, j - i));
            i = j;
        }
    }
    return out;
}

Node parse_node(const std::vector<std::string>& ts, size_t& i) {
    if (i >= ts.size()) throw ParseFail("unexpected end of input");
    if (ts[i] == "(") {
        Node n;
        ++i;
        while (i < ts.size() && ts[i] != ")") n.kids.push_back(parse_node(ts, i));
        if (i >= ts.size()) throw ParseFail("missing ')'");
        ++i;
        return n;
    }
    if (ts[i] == ")") throw ParseFail("unexpected ')'");
    Node n;
    n.atom = ts[i++];
    return n;
}

struct Val {
    bool is_bool = false;
    long long i = 0;
    bool b = false;
};

struct EvalFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Env = std::map<std::string, Val>;

Val eval(const Node& n, const Env& env);

long long eval_int(const Node& n, const Env& env) {
    Val v = eval(n, env);
    if (v.is_bool) throw EvalFail("expected Int");
    return v.i;
}

bool eval_bool(const Node& n, const Env& env) {
    Val v = eval(n, env);
    if (!v.is_bool) throw EvalFail("expected Bool");
    return v.b;
}

Val eval(const Node& n, const Env& env) {
    if (n.is_atom()) {
        const std::string& a = n.atom;
        if (a == "true") return {true, 0, true};
        if (a == "false") return {true, 0, false};
        if (a[0] == '-' && a.size() > 1) return {false, std::stoll(a), false};
        if (isdigit(static_cast<unsigned char>(a[0]))) return {false, std::stoll(a), false};
        auto it = env.find(a);
        if (it == env.end()) throw EvalFail("unbound symbol " + a);
        return it->second;
    }
    if (n.kids.empty() || !n.kids[0].is_atom()) throw EvalFail("bad application");
    const std::string& op = n.kids[0].atom;
    auto arity = n.kids.size() - 1;
    if (op == "+" || op == "*") {
        long long acc = op == "+" ? 0 : 1;
        for (size_t k = 1; k < n.kids.size(); ++k)
            acc = op == "+" ? acc + eval_int(n.kids[k], env) : acc * eval_int(n.kids[k], env);
        return {false, acc, false};
    }
    if (op == "-") {
        if (arity == 1) return {false, -eval_int(n.kids[1], env), false};
        long long acc = eval_int(n.kids[1], env);
        for (size_t k = 2; k < n.kids.size(); ++k) acc -= eval_int(n.kids[k], env);
        return {false, acc, false};
    }
    if (op == "div" || op == "mod") {
        long long a = eval_int(n.kids[1], env), b = eval_int(n.kids[2], env);
        if (b == 0) throw EvalFail("division by zero");
        // SMT-LIB euclidean semantics: remainder is non-negative
        long long q = a / b, r = a % b;
        if (r < 0) {
            q += b > 0 ? -1 : 1;
            r += b > 0 ? b : -b;
        }
        return {false, op == "div" ? q : r, false};
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
        long long a = eval_int(n.kids[1], env), b = eval_int(n.kids[2], env);
        bool r = op == "<" ? a < b : op == "<=" ? a <= b : op == ">" ? a > b : a >= b;
        return {true, 0, r};
    }
    if (op == "=") {
        Val a = eval(n.kids[1], env), b = eval(n.kids[2], env);
        if (a.is_bool != b.is_bool) throw EvalFail("= sort mismatch");
        return {true, 0, a.is_bool ? a.b == b.b : a.i == b.i};
    }
    if (op == "distinct") {
        long long a = eval_int(n.kids[1], env), b = eval_int(n.kids[2], env);
        return {true, 0, a != b};
    }
    if (op == "not") return {true, 0, !eval_bool(n.kids[1], env)};
    if (op == "and" || op == "or") {
        bool acc = op == "and";
        for (size_t k = 1; k < n.kids.size(); ++k) {
            bool v = eval_bool(n.kids[k], env);
            acc = op == "and" ? (acc && v) : (acc || v);
        }
        return {true, 0, acc};
    }
    if (op == "=>") return {true, 0, !eval_bool(n.kids[1], env) || eval_bool(n.kids[2], env)};
    if (op == "ite")
        return eval_bool(n.kids[1], env) ? eval(n.kids[2], env) : eval(n.kids[3], env);
    throw EvalFail("unsupported operator " + op);
}

void collect_symbols(const Node& n, std::set<std::string>& out) {
    if (n.is_atom()) {
        out.insert(n.atom);
        return;
    }
    for (const auto& k : n.kids) collect_symbols(k, out);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cout << "unknown\n";
        return 0;
    }
    std::ifstream in(argv[1]);
    std::ostringstream buf;
    buf << in.rdbuf();

    std::vector<std::pair<std::string, bool>> vars;  // name, is_bool (decl order)
    std::vector<Node> asserts;
    try {
        auto ts = tokenize(buf.str());
        size_t i = 0;
        while (i < ts.size()) {
            Node cmd = parse_node(ts, i);
            if (cmd.kids.empty() || !cmd.kids[0].is_atom()) throw ParseFail("bad command");
            const std::string& head = cmd.kids[0].atom;
            if (head == "declare-const") {
                if (cmd.kids.size() != 3 || !cmd.kids[1].is_atom() || !cmd.kids[2].is_atom())
                    throw ParseFail("unsupported declaration");
                const std::string& sort = cmd.kids[2].atom;
                if (sort != "Int" && sort != "Bool") throw ParseFail("unsupported sort " + sort);
                vars.push_back({cmd.kids[1].atom, sort == "Bool"});
            } else if (head == "assert") {
                asserts.push_back(cmd.kids[1]);
            } else if (head == "set-logic" || head == "check-sat" || head == "get-model" ||
                       head == "set-option" || head == "exit") {
                // no-op
            } else {
                throw ParseFail("unsupported command " + head);
            }
        }
    } catch (const std::exception&) {
        std::cout << "unknown\n";
        return 0;
    }

    // schedule each assert at the first depth where its symbols are assigned
    std::map<std::string, size_t> pos;
    for (size_t k = 0; k < vars.size(); ++k) pos[vars[k].first] = k;
    std::vector<std::vector<const Node*>> at(vars.size() + 1);
    for (const auto& a : asserts) {
        std::set<std::string> syms;
        collect_symbols(a, syms);
        size_t depth = 0;
        for (const auto& s : syms) {
            auto it = pos.find(s);
            if (it != pos.end()) depth = std::max(depth, it->second + 1);
        }
        at[depth].push_back(&a);
    }

    Env env;
    auto holds = [&](size_t depth) {
        try {
            for (const Node* a : at[depth])
                if (!eval_bool(*a, env)) return false;
        } catch (const std::exception&) {
            return false;
        }
        return true;
    };
    auto menu = [&](size_t d) {
        std::vector<Val> vs;
        if (vars[d].second) {
            vs.push_back({true, 0, false});
            vs.push_back({true, 0, true});
        } else {
            vs.push_back({false, 0, false});
            for (long long v = 1; v <= kBox; ++v) {
                vs.push_back({false, v, false});
                vs.push_back({false, -v, false});
            }
        }
        return vs;
    };

    if (!holds(0)) {
        std::cout << "unknown\n";
        return 0;
    }
    std::vector<std::vector<Val>> menus;
    for (size_t d = 0; d < vars.size(); ++d) menus.push_back(menu(d));
    std::vector<size_t> pick(vars.size(), 0);
    size_t d = 0;
    bool found = vars.empty();
    while (!found && !vars.empty()) {
        if (pick[d] == menus[d].size()) {
            if (d == 0) break;
            env.erase(vars[--d].first);
            ++pick[d];
            continue;
        }
        env[vars[d].first] = menus[d][pick[d]];
        if (!holds(d + 1)) {
            ++pick[d];
            continue;
        }
        if (d + 1 == vars.size()) {
            found = true;
            break;
        }
        pick[++d] = 0;
    }
    if (!found) {
        // the box may simply be too small; never claim unsat
        std::cout << "unknown\n";
        return 0;
    }
    std::cout << "sat\n(\n";
    for (const auto& [name, is_bool] : vars) {
        const Val& v = env[name];
        std::cout << "  (define-fun " << name << " () " << (is_bool ? "Bool" : "Int") << " ";
        if (is_bool)
            std::cout << (v.b ? "true" : "false");
        else if (v.i < 0)
            std::cout << "(- " << -v.i << ")";
        else
            std::cout << v.i;
        std::cout << ")\n";
    }
    std::cout << ")\n";
    return 0;
}
