#ifndef SGC_SEMANTICS_HPP
#define SGC_SEMANTICS_HPP

#include <map>
#include <string>

#include "sgc/ast.hpp"
#include "sgc/automaton.hpp"

namespace sgc {

/// A term's game-semantic model: the automaton plus the alphabet map that
/// says which tags belong to which free identifier.
struct Strategy {
    SymAutomaton aut;
    Context ctx;
    Type type;
    // symbolic lengths of unconstrained-length context arrays, by identifier
    std::map<std::string, SymName> array_lengths;
};

struct TranslateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Human-readable description of the move alphabet of a type: one line per
/// move constructor with its polarity and tag structure.
std::string alphabet_of(const Type& t);

struct TranslateOptions {
    bool bounds_check = false;  // array accesses out of bounds run abort
    bool simplify = true;       // constant-fold guards while building
};

class Translator {
  public:
    explicit Translator(TranslateOptions opts = {}) : opts_(opts) {}

    /// Translates a well-typed beta-normal term into its model.
    Strategy interpret(const Context& ctx, const TermP& t);

    /// Copy-cat strategy for a free identifier of (second-order) type T.
    SymAutomaton free_identifier(const std::string& name, const Type& type);

    /// Direct new-variable construction: eliminates x-tagged letters
    /// from aM, tracking the cell value in a fresh symbolic name.
    SymAutomaton new_elimination(const SymAutomaton& aM, const std::string& x, DType d,
                                 long long init);

    /// Same by definition: intersection with the cell strategy
    /// shuffled against the ambient alphabet, then restriction. Kept as a
    /// differential reference for new_elimination.
    SymAutomaton new_via_cell(const SymAutomaton& aM, const std::string& x, DType d,
                              long long init);

    /// Array analogue: the tracker is a function symbol (int -> int).
    SymAutomaton array_new_elimination(const SymAutomaton& aM, const std::string& x,
                                       long long init);

    NamePool& pool() { return pool_; }

  private:
    SymAutomaton interp(Context& ctx, const TermP& t);
    SymAutomaton plug1(Context& ctx, const SymAutomaton& c, const TermP& m1);
    SymAutomaton plug2(Context& ctx, const SymAutomaton& c, const TermP& m1, const TermP& m2);
    SymAutomaton array_element(Context& ctx, const std::string& x, const BaseType& arr,
                               const TermP& index);
    SymAutomaton tidy(const SymAutomaton& a) const;

    TranslateOptions opts_;
    NamePool pool_;
    std::map<std::string, SymName> array_lengths_;
};

}  // namespace sgc

#endif
