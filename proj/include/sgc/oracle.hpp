#ifndef SGC_ORACLE_HPP
#define SGC_ORACLE_HPP

#include <set>
#include <string>
#include <vector>

#include "sgc/ast.hpp"
#include "sgc/semantics.hpp"

namespace sgc {

/// Automaton over concrete moves (rendered as strings); a bounded trie of
/// the finite-data language, used for differential comparison.
struct ConcreteAutomaton {
    int nstates = 1;
    int initial = 0;
    std::set<int> finals;
    std::vector<std::tuple<int, std::string, int>> trans;

    /// Accepted words of at most max_len moves, rendered space-separated.
    std::set<std::string> words(int max_len) const;
};

/// Concretization of a symbolic strategy over the finite data type
/// int_n = {0..n-1}: instantiates every accepted guarded word of at most
/// max_len letters with all evaluations satisfying its condition; words
/// whose payload values fall outside int_n are excluded.
std::set<std::string> gamma(const Strategy& s, int n, int max_len);

/// Independent concrete-semantics translation over int_n: a direct
/// nondeterministic interpreter that enumerates environment behaviours
/// (values supplied, argument calls made). Shares only the AST and move
/// rendering with the symbolic pipeline. Words longer than max_len moves
/// are not explored.
ConcreteAutomaton interpret_concrete(const Context& ctx, const TermP& t, int n,
                                     int max_len);

/// Word-set equality up to max_len moves.
bool language_equal(const ConcreteAutomaton& a, const ConcreteAutomaton& b, int max_len);
bool language_equal(const std::set<std::string>& a, const std::set<std::string>& b);

}  // namespace sgc

#endif
