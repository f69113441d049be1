#include "sgc/letter.hpp"

#include <sstream>

namespace sgc {

bool is_question(MoveCtor c) {
    switch (c) {
        case MoveCtor::Q:
        case MoveCtor::Run:
        case MoveCtor::Read:
        case MoveCtor::Write: return true;
        default: return false;
    }
}

bool has_payload(MoveCtor c) { return c == MoveCtor::Write || c == MoveCtor::Val; }

std::string ctor_name(MoveCtor c) {
    switch (c) {
        case MoveCtor::Q: return "q";
        case MoveCtor::Run: return "run";
        case MoveCtor::Read: return "read";
        case MoveCtor::Write: return "write";
        case MoveCtor::Done: return "done";
        case MoveCtor::Ok: return "ok";
        case MoveCtor::Val: return "val";
    }
    return "?";
}

std::string TagAtom::display() const {
    switch (kind) {
        case Kind::Ident: return ident;
        case Kind::Arg: return std::to_string(arg);
        case Kind::Cell: return ident + "[" + render(cell_index) + "]";
    }
    return "?";
}

bool tag_equal(const TagAtom& a, const TagAtom& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case TagAtom::Kind::Ident: return a.ident == b.ident;
        case TagAtom::Kind::Arg: return a.arg == b.arg;
        case TagAtom::Kind::Cell: return a.ident == b.ident && exp_equal(a.cell_index, b.cell_index);
    }
    return false;
}

GuardAtom GuardAtom::of_plain(BExpP b) {
    GuardAtom a;
    a.kind = Kind::Plain;
    a.plain = std::move(b);
    return a;
}

GuardAtom GuardAtom::of_bind(SymName x, std::optional<Exp> rhs) {
    GuardAtom a;
    a.kind = Kind::Bind;
    a.bind_name = x;
    a.bind_rhs = std::move(rhs);
    return a;
}

GuardAtom GuardAtom::of_arr_init(FunSym f, Exp v) {
    GuardAtom a;
    a.kind = Kind::ArrInit;
    a.fun = f;
    a.arr_value = std::move(v);
    return a;
}

GuardAtom GuardAtom::of_arr_update(FunSym f, AExpP index, Exp v) {
    GuardAtom a;
    a.kind = Kind::ArrUpdate;
    a.fun = f;
    a.arr_index = std::move(index);
    a.arr_value = std::move(v);
    return a;
}

std::string GuardAtom::display() const {
    switch (kind) {
        case Kind::Plain: return render(plain);
        case Kind::Bind:
            if (bind_rhs) return "?" + bind_name.display() + "=" + render(*bind_rhs);
            return "?" + bind_name.display();
        case Kind::ArrInit:
            return fun.name.display() + "(_):=" + render(*arr_value);
        case Kind::ArrUpdate:
            return fun.name.display() + "(" + render(arr_index) + "):=" + render(*arr_value);
    }
    return "?";
}

bool Guard::has_bind() const {
    for (const auto& a : atoms)
        if (a.kind != GuardAtom::Kind::Plain) return true;
    return false;
}

Guard Guard::of(BExpP b) {
    Guard g;
    if (auto v = as_literal(b); v && *v) return g;
    g.atoms.push_back(GuardAtom::of_plain(std::move(b)));
    return g;
}

Guard Guard::then(const Guard& g) const {
    Guard out = *this;
    out.atoms.insert(out.atoms.end(), g.atoms.begin(), g.atoms.end());
    return out;
}

std::string Guard::display() const {
    if (atoms.empty()) return "tt";
    std::ostringstream os;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << " && ";
        os << atoms[i].display();
    }
    return os.str();
}

GuardedLetter gl(SymLetter m) { return GuardedLetter{Guard::tt(), std::move(m)}; }
GuardedLetter gl(Guard g, SymLetter m) { return GuardedLetter{std::move(g), std::move(m)}; }

SymLetter mk_letter(MoveCtor c, std::vector<TagAtom> tags) {
    return SymLetter{c, std::nullopt, std::move(tags)};
}

SymLetter mk_letter_exp(MoveCtor c, Exp payload, std::vector<TagAtom> tags) {
    return SymLetter{c, Payload::of_exp(std::move(payload)), std::move(tags)};
}

SymLetter mk_letter_binder(MoveCtor c, SymName binder, std::vector<TagAtom> tags) {
    return SymLetter{c, Payload::of_binder(binder), std::move(tags)};
}

bool letter_equal(const SymLetter& a, const SymLetter& b) {
    if (a.ctor != b.ctor) return false;
    if (a.tags.size() != b.tags.size()) return false;
    for (size_t i = 0; i < a.tags.size(); ++i)
        if (!tag_equal(a.tags[i], b.tags[i])) return false;
    if (a.payload.has_value() != b.payload.has_value()) return false;
    if (a.payload) {
        if (a.payload->binder != b.payload->binder) return false;
        if (a.payload->binder) return a.payload->bname == b.payload->bname;
        return exp_equal(a.payload->expr, b.payload->expr);
    }
    return true;
}

std::string render(const SymLetter& m) {
    std::ostringstream os;
    if (m.ctor == MoveCtor::Val) {
        // value answers render as the payload itself: 3, X, ?Z
        if (m.payload->binder)
            os << "?" << m.payload->bname.display();
        else
            os << render(m.payload->expr);
    } else {
        os << ctor_name(m.ctor);
        if (m.ctor == MoveCtor::Write) {
            os << "(";
            if (m.payload->binder)
                os << "?" << m.payload->bname.display();
            else
                os << render(m.payload->expr);
            os << ")";
        }
    }
    if (!m.tags.empty()) {
        os << "^{";
        for (size_t i = 0; i < m.tags.size(); ++i) {
            if (i) os << ",";
            os << m.tags[i].display();
        }
        os << "}";
    }
    return os.str();
}

std::string render(const GuardedLetter& b) {
    if (b.guard.is_tt()) return render(b.letter);
    return "[" + b.guard.display() + "] " + render(b.letter);
}

}  // namespace sgc
