#ifndef SGC_AUTOMATON_HPP
#define SGC_AUTOMATON_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sgc/letter.hpp"

namespace sgc {

/// Transition over a guarded alphabet; letter == nullopt is an epsilon
/// transition that still carries its guard.
struct Transition {
    int src = 0;
    Guard guard;
    std::optional<SymLetter> letter;
    int dst = 0;
};

/// Finite automaton over a guarded alphabet.
struct SymAutomaton {
    int nstates = 0;
    int initial = 0;
    std::set<int> finals;
    std::vector<Transition> trans;
    // Conditions under which the empty word is accepted in addition to
    // `initial in finals` (produced by epsilon elimination of guarded
    // initial-to-final epsilon paths).
    std::vector<Guard> accept_empty;
};

SymAutomaton aut_empty();
SymAutomaton aut_epsilon();
SymAutomaton aut_letter(GuardedLetter b);

SymAutomaton concat(const SymAutomaton& a, const SymAutomaton& b);
SymAutomaton alt(const SymAutomaton& a, const SymAutomaton& b);  // union
SymAutomaton star(const SymAutomaton& a);

/// Product synchronizing on compatible symbolic letters: same constructor
/// and tags; payloads are unified (expr/expr adds an equality conjunct,
/// binder/expr adds a binding conjunct). Guards of matched letters are
/// conjoined left-then-right.
SymAutomaton intersect(const SymAutomaton& a, const SymAutomaton& b);

SymAutomaton shuffle(const SymAutomaton& a, const SymAutomaton& b);

/// Tags transitions out of the initial state and into final states.
SymAutomaton rename(const SymAutomaton& a, const TagAtom& tag);

/// Synchronized-product composition; removes every letter tagged exactly
/// [tag]. a1 is the client (uses tag-letters anywhere), a2 the callee (its
/// tag-letters are exactly its boundary transitions). When `substitute` is
/// set, a binder payload met by an expression payload is substituted
/// downstream instead of emitting a binding conjunct.
SymAutomaton compose(const SymAutomaton& a1, const SymAutomaton& a2, const TagAtom& tag,
                     bool substitute = true);

/// Reference implementation of composition: the flat state-sum construction
/// (kept for differential testing against the product construction).
SymAutomaton compose_flat(const SymAutomaton& a1, const SymAutomaton& a2, const TagAtom& tag);

/// Replaces selected letters with epsilon, keeping their guards. Binder
/// payloads on erased letters become unconstrained binding conjuncts.
SymAutomaton restrict(const SymAutomaton& a, const std::function<bool(const SymLetter&)>& sel);

/// Selector matching letters whose tag list starts with the given atom.
std::function<bool(const SymLetter&)> tag_selector(const TagAtom& t);

SymAutomaton eliminate_epsilon(const SymAutomaton& a);
SymAutomaton prune_unreachable(const SymAutomaton& a);
/// Forward- and backward-prune: keeps states on some initial-to-final path.
SymAutomaton trim(const SymAutomaton& a);
/// Constant folding on guards and payloads; drops ff-guarded transitions.
SymAutomaton simplify(const SymAutomaton& a);
/// Drops binding conjuncts ?A = N whose right side is a bare name, renaming
/// later occurrences of A to N while both stand for the same value (a bind
/// that saves the old value is re-emitted where N is rebound and A is still
/// live). Play conditions are preserved up to such variable aliasing.
SymAutomaton collapse_aliases(const SymAutomaton& a);
/// Deterministic renumbering (BFS from initial) and transition ordering.
SymAutomaton normalize(const SymAutomaton& a);
/// Merges states with identical outgoing behaviour (partition refinement);
/// language-preserving coarse quotient used for model-size reporting.
SymAutomaton quotient(const SymAutomaton& a);

/// Guarded word as stored in the automaton (no binder instantiation);
/// trailing holds guards of epsilon transitions after the last letter.
struct RawWord {
    std::vector<GuardedLetter> letters;
    Guard trailing;
    std::string display() const;
};

/// All accepted words with at most max_len letters. Epsilon transitions are
/// absorbed into the guard stream; epsilon streaks never revisit a state.
std::vector<RawWord> enumerate_raw_words(const SymAutomaton& a, int max_len);

/// Rendered, sorted, deduplicated word set (structural language comparison).
std::set<std::string> raw_language(const SymAutomaton& a, int max_len);

std::string to_dot(const SymAutomaton& a);

}  // namespace sgc

#endif
