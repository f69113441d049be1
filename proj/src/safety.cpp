#include "sgc/safety.hpp"

#include <sstream>
#include <stdexcept>

namespace sgc {

std::string Verdict::kind_name() const {
    switch (kind) {
        case Kind::Safe: return "safe";
        case Kind::Unsafe: return "unsafe";
        case Kind::Inconclusive: return "inconclusive";
    }
    return "";
}

std::vector<Play> unsafe_plays(const Strategy& s, int max_len) {
    std::vector<Play> out;
    for (auto& p : enumerate_plays(s.aut, max_len))
        if (p.complete && p.aborting) out.push_back(std::move(p));
    return out;  // enumerate_plays already orders by (length, rendered word)
}

Verdict check_safety(const Strategy& s, const SolverOptions& solver, int max_len) {
    Verdict v;
    v.explored_depth = max_len;
    // Deepen one length at a time so a short feasible counterexample is
    // reported without materializing the (possibly exponential) play set at
    // the full bound.
    for (int len = 1; len <= max_len; ++len) {
        for (const auto& p : enumerate_plays(s.aut, len)) {
            if (!p.complete || !p.aborting) continue;
            if (static_cast<int>(p.letters.size()) != len) continue;
            Constraint c = constraint_of(p);
            SatResult r = check_sat(c, solver);
            switch (r.kind) {
                case SatResult::Kind::Sat:
                    v.kind = Verdict::Kind::Unsafe;
                    v.play = p;
                    v.model = r.model;
                    v.concrete = concretize(p, r.model);
                    return v;
                case SatResult::Kind::Unsat: break;
                case SatResult::Kind::Unknown: ++v.unknowns; break;
            }
        }
    }
    v.kind = v.unknowns ? Verdict::Kind::Inconclusive : Verdict::Kind::Safe;
    return v;
}

Report report_of(const Verdict& v) {
    Report r;
    r.verdict = v.kind_name();
    r.max_len = v.explored_depth;
    r.unknowns = v.unknowns;
    if (v.kind == Verdict::Kind::Unsafe) {
        for (const auto& m : v.play.letters) r.letters.push_back(render(m));
        for (const auto& b : v.play.condition) r.condition.push_back(render(b));
        for (const auto& [nm, val] : v.model.names) {
            std::ostringstream os;
            os << nm.display() << " " << (val.dtype == DType::Int ? "int" : "bool") << " "
               << val.display();
            r.model.push_back(os.str());
        }
        r.concrete = v.concrete;
    }
    return r;
}

std::string render_report(const Report& r) {
    std::ostringstream os;
    os << "verdict " << r.verdict << "\n";
    os << "max-len " << r.max_len << "\n";
    os << "unknowns " << r.unknowns << "\n";
    for (const auto& l : r.letters) os << "letter " << l << "\n";
    for (const auto& c : r.condition) os << "condition " << c << "\n";
    for (const auto& m : r.model) os << "model " << m << "\n";
    if (!r.concrete.empty()) os << "concrete " << r.concrete << "\n";
    return os.str();
}

Report parse_report(const std::string& text) {
    Report r;
    std::istringstream is(text);
    std::string line;
    bool saw_verdict = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        size_t sp = line.find(' ');
        std::string key = line.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (key == "verdict") {
            if (rest != "safe" && rest != "unsafe" && rest != "inconclusive")
                throw std::runtime_error("report: bad verdict '" + rest + "'");
            r.verdict = rest;
            saw_verdict = true;
        } else if (key == "max-len") {
            r.max_len = std::stoi(rest);
        } else if (key == "unknowns") {
            r.unknowns = std::stoi(rest);
        } else if (key == "letter") {
            r.letters.push_back(rest);
        } else if (key == "condition") {
            r.condition.push_back(rest);
        } else if (key == "model") {
            r.model.push_back(rest);
        } else if (key == "concrete") {
            r.concrete = rest;
        } else {
            throw std::runtime_error("report: unknown line '" + line + "'");
        }
    }
    if (!saw_verdict) throw std::runtime_error("report: missing verdict line");
    return r;
}

}  // namespace sgc
