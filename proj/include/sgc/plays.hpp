#ifndef SGC_PLAYS_HPP
#define SGC_PLAYS_HPP

#include <string>
#include <vector>

#include "sgc/automaton.hpp"

namespace sgc {

/// One event in the history of a local array: either an initialization
/// (every cell gets `value`) or a single-cell update. The array's version
/// after k events is k; a function application F[v](i) reads the contents
/// after the first v events.
struct ArrayEvent {
    bool is_init = false;
    AExpP index;  // updates only
    Exp value;
};

struct ArrayChain {
    FunSym fun;
    std::vector<ArrayEvent> events;
};

/// A play: one path through the automaton with every binding conjunct and
/// binder payload instantiated to a fresh input name, so the condition is a
/// plain (ordered) conjunction over the inputs.
struct Play {
    std::vector<SymLetter> letters;  // payloads are expressions over inputs
    std::vector<BExpP> condition;    // temporal order; literal tt omitted
    std::vector<ArrayChain> arrays;
    std::vector<SymName> inputs;     // instantiated names, creation order
    std::vector<int> path;           // states visited; front is the initial
    bool aborting = false;           // some move is tagged with "abort"
    bool complete = false;           // ends in a final state

    std::string word_display() const;
    std::string condition_display() const;
};

/// Incrementally instantiates a path; copy to branch.
class PlayBuilder {
  public:
    explicit PlayBuilder(const SymAutomaton& a);

    /// Extends the play across t; t.src must equal state().
    void step(const Transition& t);

    int state() const { return state_; }
    size_t length() const { return play_.letters.size(); }
    bool aborting() const { return play_.aborting; }

    /// The play so far, with display names finalized: an input whose base
    /// name occurs once keeps the bare name, repeated ones get 1, 2, ...
    Play snapshot() const;

  private:
    SymName fresh_instance(const SymName& base);

    const SymAutomaton* aut_;
    int state_;
    Play play_;
    std::map<SymName, Exp> cur_;   // base name -> current instance
    std::map<SymName, int> ver_;   // array tracker -> events so far
    int next_index_;
    std::vector<std::pair<SymName, SymName>> instances_;  // (base, instance)
};

/// All plays of at most max_len letters ending in a final state, shortest
/// first, ties broken by the rendered word. Epsilon transitions contribute
/// their guards without revisiting a state between letters.
std::vector<Play> enumerate_plays(const SymAutomaton& a, int max_len);

/// The play's word under an evaluation of its inputs (and array chains).
std::string concretize(const Play& p, const Evaluation& rho);

}  // namespace sgc

#endif
