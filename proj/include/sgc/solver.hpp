#ifndef SGC_SOLVER_HPP
#define SGC_SOLVER_HPP

#include <string>
#include <vector>

#include "sgc/plays.hpp"

namespace sgc {

/// One array read occurrence: result = contents of `fun` after the first
/// `version` events of its chain, at `index`.
struct ArrayRead {
    FunSym fun;
    int version = 0;
    AExpP index;
    SymName result;
};

/// A play condition in solver form: plain conjuncts over scalar names (no
/// function applications), array event chains, and the reads tying results
/// back into the conjuncts.
struct Constraint {
    std::vector<BExpP> conjuncts;
    std::vector<ArrayChain> arrays;
    std::vector<ArrayRead> reads;
};

/// Extracts a Constraint from a play: every function application in the
/// condition becomes an ArrayRead with a fresh result name.
Constraint constraint_of(const Play& p);

struct SatResult {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind = Kind::Unknown;
    Evaluation model;    // Sat only
    std::string reason;  // Unknown only

    static SatResult sat(Evaluation m) { return {Kind::Sat, std::move(m), ""}; }
    static SatResult unsat() { return {Kind::Unsat, {}, ""}; }
    static SatResult unknown(std::string why) { return {Kind::Unknown, {}, std::move(why)}; }
};

struct SolverOptions {
    int bound = 64;    // builtin search box is [-bound, bound]
    std::string exec;  // external solver command; empty selects the builtin
};

/// Bounded decision procedure: equality propagation, interval narrowing,
/// then exhaustive enumeration over the box, smallest absolute value first
/// (ties to the non-negative). Sat iff a model exists inside the box; Unsat
/// when propagation refutes the constraint outright; Unknown otherwise.
SatResult check_sat_builtin(const Constraint& c, int bound = 64);

/// Emits SMT-LIB2, runs `command <file>`, parses sat/unsat/unknown and the
/// model. Any protocol failure yields Unknown, never a crash.
SatResult check_sat_external(const Constraint& c, const std::string& command);

/// Dispatches on opts.exec.
SatResult check_sat(const Constraint& c, const SolverOptions& opts = {});

/// SMT-LIB2 rendering: declarations, array chains as stores over constant
/// arrays, one assertion per conjunct/read, check-sat and get-model.
std::string to_smtlib(const Constraint& c);

/// True iff rho satisfies every conjunct and every read agrees with the
/// array contents derived from the chains under rho.
bool validate_model(const Constraint& c, const Evaluation& rho);

/// Array contents per version derived from the chains under rho (version k
/// is the state after the first k events); merged into rho's array map.
Evaluation with_derived_arrays(const Constraint& c, Evaluation rho);

}  // namespace sgc

#endif
