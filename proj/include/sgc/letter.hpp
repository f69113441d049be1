#ifndef SGC_LETTER_HPP
#define SGC_LETTER_HPP

#include <optional>
#include <string>
#include <vector>

#include "sgc/expr.hpp"

namespace sgc {

/// Move constructors of the game alphabets. q/run/read/write are questions,
/// done/ok/val answers; write and val carry a payload.
enum class MoveCtor { Q, Run, Read, Write, Done, Ok, Val };

bool is_question(MoveCtor c);
bool has_payload(MoveCtor c);
std::string ctor_name(MoveCtor c);

/// One atom of a tag suffix: a free-identifier name, an argument position,
/// or an array cell x[a].
struct TagAtom {
    enum class Kind { Ident, Arg, Cell };
    Kind kind = Kind::Ident;
    std::string ident;
    int arg = 0;
    AExpP cell_index;  // Cell only

    static TagAtom of_ident(std::string n) { return {Kind::Ident, std::move(n), 0, nullptr}; }
    static TagAtom of_arg(int i) { return {Kind::Arg, "", i, nullptr}; }
    static TagAtom of_cell(std::string n, AExpP ix) {
        return {Kind::Cell, std::move(n), 0, std::move(ix)};
    }
    std::string display() const;
};

bool tag_equal(const TagAtom& a, const TagAtom& b);

/// Move payload: either an expression or an input symbol ?X that binds a
/// fresh name supplied by the environment.
struct Payload {
    bool binder = false;
    SymName bname;  // binder only
    Exp expr;       // expression only

    static Payload of_binder(SymName x) { return {true, x, {}}; }
    static Payload of_exp(Exp e) { return {false, {}, std::move(e)}; }
    DType dtype() const { return binder ? bname.dtype : expr.dtype; }
};

struct SymLetter {
    MoveCtor ctor = MoveCtor::Q;
    std::optional<Payload> payload;
    std::vector<TagAtom> tags;  // outermost tag first: m^{f,1} has tags [f, 1]

    bool question() const { return is_question(ctor); }
};

/// One conjunct of a guard. Atom order is temporal: a Bind affects the
/// interpretation of every name occurrence after it.
struct GuardAtom {
    enum class Kind { Plain, Bind, ArrInit, ArrUpdate };
    Kind kind = Kind::Plain;

    BExpP plain;

    SymName bind_name;              // Bind: ?X = rhs; rhs empty = unconstrained input
    std::optional<Exp> bind_rhs;    // evaluated before X is rebound

    FunSym fun;                     // ArrInit / ArrUpdate
    std::optional<Exp> arr_value;   // init value / update value
    AExpP arr_index;                // ArrUpdate only

    static GuardAtom of_plain(BExpP b);
    static GuardAtom of_bind(SymName x, std::optional<Exp> rhs);
    static GuardAtom of_arr_init(FunSym f, Exp v);
    static GuardAtom of_arr_update(FunSym f, AExpP index, Exp v);

    std::string display() const;
};

/// Ordered conjunction of guard atoms; empty list is tt.
struct Guard {
    std::vector<GuardAtom> atoms;

    bool is_tt() const { return atoms.empty(); }
    bool has_bind() const;
    static Guard tt() { return {}; }
    static Guard of(BExpP b);
    Guard then(const Guard& g) const;  // this ++ g
    std::string display() const;
};

struct GuardedLetter {
    Guard guard;
    SymLetter letter;
};

GuardedLetter gl(SymLetter m);
GuardedLetter gl(Guard g, SymLetter m);

SymLetter mk_letter(MoveCtor c, std::vector<TagAtom> tags = {});
SymLetter mk_letter_exp(MoveCtor c, Exp payload, std::vector<TagAtom> tags = {});
SymLetter mk_letter_binder(MoveCtor c, SymName binder, std::vector<TagAtom> tags = {});

bool letter_equal(const SymLetter& a, const SymLetter& b);

/// Canonical text rendering: "[b] m^{f,1}(payload)"; guard omitted when tt.
std::string render(const SymLetter& m);
std::string render(const GuardedLetter& b);

}  // namespace sgc

#endif
