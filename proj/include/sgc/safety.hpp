#ifndef SGC_SAFETY_HPP
#define SGC_SAFETY_HPP

#include "sgc/plays.hpp"
#include "sgc/semantics.hpp"
#include "sgc/solver.hpp"

namespace sgc {

struct Verdict {
    enum class Kind { Safe, Unsafe, Inconclusive };
    Kind kind = Kind::Safe;
    int explored_depth = 0;  // Safe / Inconclusive: max word length examined
    int unknowns = 0;        // Inconclusive: plays whose condition was Unknown
    Play play;               // Unsafe: the feasible unsafe play
    Evaluation model;        // Unsafe: a model of its condition
    std::string concrete;    // Unsafe: the concretized play
    std::string kind_name() const;
};

/// Complete plays containing an abort-tagged move, of word length at most
/// max_len, in nondecreasing length (ties by rendered word).
std::vector<Play> unsafe_plays(const Strategy& s, int max_len);

/// Checks the unsafe plays in order; the first satisfiable condition yields
/// Unsafe with model and concretization. All Unsat up to max_len yields
/// Safe(max_len); any Unknown without a later Sat yields Inconclusive.
Verdict check_safety(const Strategy& s, const SolverOptions& solver, int max_len);

/// Line-delimited, self-describing rendering of a Verdict: one keyword-
/// prefixed line per fact (verdict, max-len, unknowns, letter, condition,
/// model, concrete). Diff-friendly and parseable back.
struct Report {
    std::string verdict;  // safe | unsafe | inconclusive
    int max_len = 0;
    int unknowns = 0;
    std::vector<std::string> letters;    // unsafe: the symbolic play
    std::vector<std::string> condition;  // unsafe: ordered conjuncts
    std::vector<std::string> model;      // unsafe: "<name> <int|bool> <value>"
    std::string concrete;                // unsafe: the concretized play
    bool operator==(const Report&) const = default;
};

Report report_of(const Verdict& v);
std::string render_report(const Report& r);
/// Inverse of render_report; throws std::runtime_error on malformed input.
Report parse_report(const std::string& text);

}  // namespace sgc

#endif
