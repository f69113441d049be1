// Command-line driver: translate a term into its symbolic automaton and
// check safety (mode check), export the model (mode model), or list the
// finite-data concretization (mode gamma).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sgc/ast.hpp"
#include "sgc/oracle.hpp"
#include "sgc/safety.hpp"
#include "sgc/semantics.hpp"

namespace {

constexpr int kExitSafe = 0;
constexpr int kExitUnsafe = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Translates second-order terms into symbolic automata and checks safety"};
    std::string input;
    std::string mode = "check";
    std::string solver = "builtin";
    int bound = 64;
    int max_len = 64;
    int finite = 0;
    bool bounds_check = false;
    bool no_simplify = false;
    std::string dot_path;

    app.add_option("input", input, "term file ('-' reads standard input)")->required();
    app.add_option("--mode", mode, "check | model | gamma")
        ->check(CLI::IsMember({"check", "model", "gamma"}))
        ->capture_default_str();
    app.add_option("--solver", solver, "builtin | exec:<command>")->capture_default_str();
    app.add_option("--bound", bound, "builtin solver search box [-N, N]")->capture_default_str();
    app.add_option("--max-len", max_len, "longest play explored")->capture_default_str();
    app.add_option("--finite", finite, "data domain {0..N-1} (gamma mode)");
    app.add_flag("--bounds-check", bounds_check, "array accesses out of bounds abort");
    app.add_flag("--no-simplify", no_simplify, "skip guard simplification");
    app.add_option("--dot", dot_path, "also write the model's DOT to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInputError;
    }

    sgc::SolverOptions sopts;
    sopts.bound = bound;
    if (solver.rfind("exec:", 0) == 0) {
        sopts.exec = solver.substr(5);
        if (sopts.exec.empty()) {
            std::cerr << "error: --solver exec: requires a command\n";
            return kExitInputError;
        }
    } else if (solver != "builtin") {
        std::cerr << "error: --solver must be 'builtin' or 'exec:<command>'\n";
        return kExitInputError;
    }
    if (mode == "gamma" && finite <= 0) {
        std::cerr << "error: --mode gamma requires --finite N with N >= 1\n";
        return kExitInputError;
    }

    try {
        sgc::Judgement j = sgc::parse_judgement(slurp(input));
        sgc::typecheck(j);
        sgc::TranslateOptions topts;
        topts.bounds_check = bounds_check;
        topts.simplify = !no_simplify;
        sgc::Translator tr(topts);
        sgc::Strategy s = tr.interpret(j.ctx, sgc::beta_normalize(j.term));

        if (!dot_path.empty()) write_file(dot_path, sgc::to_dot(s.aut));

        if (mode == "model") {
            std::cout << sgc::to_dot(s.aut);
            std::cout << "states " << s.aut.nstates << " transitions " << s.aut.trans.size()
                      << "\n";
            sgc::SymAutomaton q = sgc::quotient(s.aut);
            std::cout << "quotient-states " << q.nstates << " quotient-transitions "
                      << q.trans.size() << "\n";
            return kExitSafe;
        }
        if (mode == "gamma") {
            for (const auto& w : sgc::gamma(s, finite, max_len)) std::cout << w << "\n";
            return kExitSafe;
        }
        sgc::Verdict v = sgc::check_safety(s, sopts, max_len);
        std::cout << sgc::render_report(sgc::report_of(v));
        switch (v.kind) {
            case sgc::Verdict::Kind::Safe: return kExitSafe;
            case sgc::Verdict::Kind::Unsafe: return kExitUnsafe;
            case sgc::Verdict::Kind::Inconclusive: return kExitInconclusive;
        }
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
