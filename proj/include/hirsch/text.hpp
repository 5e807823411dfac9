#pragma once

// Textual formats: CDGAs, Lie algebras, sub-CDGAs, morphisms, and job files
// made of `object <kind> <name> ... { ... }` blocks and one `run` line.

#include "hirsch/models.hpp"

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace hirsch {

class JobError : public std::runtime_error {
public:
    JobError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace text {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

// Splits on commas outside parentheses and brackets.
inline std::vector<std::string> split_top_level(std::string_view s, char sep = ',') {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

struct Line {
    std::size_t number = 0;
    std::string text;
};

inline std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> out;
    std::string s;
    for (std::size_t n = 1; std::getline(in, s); ++n) {
        if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
        s = trim(s);
        if (!s.empty()) out.push_back({n, s});
    }
    return out;
}

inline std::vector<Line> read_lines(const std::string& s) {
    std::istringstream in(s);
    return read_lines(in);
}

// ---------------------------------------------------------------------------
// CDGA: `generators` section of `name : degree`, `d` section of `name -> expr`.

inline CDGA parse_cdga(const std::vector<Line>& lines) {
    std::vector<Generator> gens;
    std::vector<std::pair<Line, std::string>> diffs;
    enum class Section { none, generators, d } section = Section::none;
    for (const auto& l : lines) {
        std::string t = l.text;
        if (t == "}") continue;
        if (t.back() == '{') t = trim(t.substr(0, t.size() - 1));
        if (!t.empty() && t.back() == ':') t = trim(t.substr(0, t.size() - 1));
        if (t == "generators") {
            section = Section::generators;
            continue;
        }
        if (t == "d") {
            section = Section::d;
            continue;
        }
        if (section == Section::generators) {
            const auto colon = t.find(':');
            if (colon == std::string::npos) throw JobError(l.number, "expected 'name : degree'");
            try {
                gens.push_back({trim(t.substr(0, colon)), std::stoi(trim(t.substr(colon + 1)))});
            } catch (const std::logic_error&) {
                throw JobError(l.number, "invalid degree in '" + t + "'");
            }
        } else if (section == Section::d) {
            const auto arrow = t.find("->");
            if (arrow == std::string::npos) throw JobError(l.number, "expected 'name -> expression'");
            diffs.push_back({l, t});
        } else {
            throw JobError(l.number, "expected a 'generators' or 'd' section");
        }
    }
    GeneratorSetPtr g;
    try {
        g = make_generators(std::move(gens));
    } catch (const StructureError& e) {
        throw JobError(lines.empty() ? 0 : lines.front().number, e.what());
    }
    std::vector<Element> d(g->size(), Element(g));
    std::vector<bool> seen(g->size(), false);
    for (const auto& [l, t] : diffs) {
        const auto arrow = t.find("->");
        const std::string name = trim(t.substr(0, arrow));
        auto idx = g->find(name);
        if (!idx) throw JobError(l.number, "unknown generator '" + name + "'");
        if (seen[*idx]) throw JobError(l.number, "differential of '" + name + "' given twice");
        seen[*idx] = true;
        try {
            d[*idx] = parse_element(g, t.substr(arrow + 2));
        } catch (const ParseError& e) {
            throw JobError(l.number, e.what());
        }
        if (!d[*idx].is_homogeneous_of((*g)[*idx].degree + 1))
            throw JobError(l.number, "d(" + name + ") must be homogeneous of degree " + std::to_string((*g)[*idx].degree + 1));
    }
    return CDGA(g, std::move(d));
}

inline CDGA parse_cdga(const std::string& s) { return parse_cdga(read_lines(s)); }

inline std::string format_cdga(const CDGA& a) {
    std::string out = "generators\n";
    const auto& g = *a.generators();
    for (const auto& gen : g.generators()) out += "  " + gen.name + " : " + std::to_string(gen.degree) + "\n";
    out += "d\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!a.d_of(i).is_zero()) out += "  " + g[i].name + " -> " + format_element(a.d_of(i)) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Lie algebras: `dim m` then `[i,j] = c1*e1 + ...`, or a preset expression.

// `heisenberg(l) + abelian(r)`, `heisenberg(l)`, `abelian(r)`, `filiform(n)`.
inline std::optional<LieAlgebra> parse_lie_preset(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    int l = 0, r = 0;
    bool any = false;
    std::optional<int> filiform;
    for (const auto& part : split_top_level(s, '+')) {
        const auto open = part.find('('), close = part.rfind(')');
        if (open == std::string::npos || close != part.size() - 1) return std::nullopt;
        const std::string name = part.substr(0, open);
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(part.substr(open + 1, close - open - 1), &used);
            if (used != close - open - 1 || n < 0) return std::nullopt;
        } catch (const std::logic_error&) {
            return std::nullopt;
        }
        if (name == "heisenberg")
            l += n;
        else if (name == "abelian")
            r += n;
        else if (name == "filiform" && !filiform)
            filiform = n;
        else
            return std::nullopt;
        any = true;
    }
    if (!any) return std::nullopt;
    if (filiform) {
        if (l != 0 || r != 0 || *filiform < 2) return std::nullopt;
        // [e1, e_i] = e_{i+1}, i = 2..n-1
        const auto n = static_cast<std::size_t>(*filiform);
        LieAlgebra g(n);
        for (std::size_t i = 1; i + 1 < n; ++i) g.set_bracket(0, i, unit_vector(n, i + 1));
        return g;
    }
    return heisenberg_sum(l, r);
}

inline LieAlgebra parse_lie(const std::vector<Line>& lines) {
    if (lines.size() == 1 && lines.front().text.rfind("dim", 0) != 0) {
        if (auto p = parse_lie_preset(lines.front().text)) return *p;
        throw JobError(lines.front().number, "unknown Lie algebra preset '" + lines.front().text + "'");
    }
    std::optional<LieAlgebra> g;
    GeneratorSetPtr basis;
    for (const auto& l : lines) {
        const auto words = split_words(l.text);
        if (words.size() == 2 && words[0] == "dim") {
            if (g) throw JobError(l.number, "dimension given twice");
            int m = 0;
            try {
                m = std::stoi(words[1]);
            } catch (const std::logic_error&) {
                throw JobError(l.number, "invalid dimension");
            }
            if (m < 0) throw JobError(l.number, "invalid dimension");
            g = LieAlgebra(static_cast<std::size_t>(m));
            std::vector<Generator> gens;
            for (const auto& lab : g->labels()) gens.push_back({lab, 1});
            basis = make_generators(std::move(gens));
            continue;
        }
        if (l.text.front() != '[') throw JobError(l.number, "expected 'dim m' or '[i,j] = ...'");
        if (!g) throw JobError(l.number, "bracket before 'dim'");
        const auto close = l.text.find(']');
        const auto eq = l.text.find('=', close == std::string::npos ? 0 : close);
        if (close == std::string::npos || eq == std::string::npos) throw JobError(l.number, "expected '[i,j] = expression'");
        const auto idx = split_top_level(l.text.substr(1, close - 1));
        if (idx.size() != 2) throw JobError(l.number, "expected two bracket indices");
        std::size_t i = 0, j = 0;
        try {
            i = static_cast<std::size_t>(std::stoul(idx[0]));
            j = static_cast<std::size_t>(std::stoul(idx[1]));
        } catch (const std::logic_error&) {
            throw JobError(l.number, "bracket indices must be integers");
        }
        if (i < 1 || j < 1 || i > g->dimension() || j > g->dimension()) throw JobError(l.number, "bracket index out of range");
        if (i >= j) throw JobError(l.number, "brackets are given for i < j");
        Element e(basis);
        try {
            e = parse_element(basis, l.text.substr(eq + 1));
        } catch (const ParseError& err) {
            throw JobError(l.number, err.what());
        }
        if (!e.is_homogeneous_of(1)) throw JobError(l.number, "bracket value must be linear in e1..em");
        Vector v(g->dimension());
        for (const auto& [m, c] : e.terms())
            for (std::size_t k = 0; k < m.size(); ++k)
                if (m[k]) v[k] = c;
        try {
            g->set_bracket(i - 1, j - 1, v);
        } catch (const LieError& err) {
            throw JobError(l.number, err.what());
        }
    }
    if (!g) throw JobError(lines.empty() ? 0 : lines.front().number, "missing 'dim m'");
    return *g;
}

inline LieAlgebra parse_lie(const std::string& s) { return parse_lie(read_lines(s)); }

// ---------------------------------------------------------------------------
// Sub-CDGAs: `basis[k] = [e1, e2, ...]`.

inline SubCDGA parse_subcdga(const CDGA& ambient, const std::vector<Line>& lines, std::optional<int> top = std::nullopt) {
    std::vector<std::vector<Element>> bases;
    for (const auto& l : lines) {
        const auto& t = l.text;
        if (t.rfind("basis[", 0) != 0) throw JobError(l.number, "expected 'basis[k] = [...]'");
        const auto close = t.find(']');
        const auto eq = t.find('=', close);
        if (close == std::string::npos || eq == std::string::npos) throw JobError(l.number, "expected 'basis[k] = [...]'");
        int k = 0;
        try {
            k = std::stoi(t.substr(6, close - 6));
        } catch (const std::logic_error&) {
            throw JobError(l.number, "invalid degree");
        }
        if (k < 0) throw JobError(l.number, "invalid degree");
        const std::string list = trim(t.substr(eq + 1));
        if (list.size() < 2 || list.front() != '[' || list.back() != ']') throw JobError(l.number, "expected a bracketed list");
        if (bases.size() <= static_cast<std::size_t>(k)) bases.resize(static_cast<std::size_t>(k) + 1);
        if (!bases[static_cast<std::size_t>(k)].empty()) throw JobError(l.number, "basis of degree " + std::to_string(k) + " given twice");
        for (const auto& item : split_top_level(list.substr(1, list.size() - 2))) {
            if (item.empty()) continue;
            try {
                bases[static_cast<std::size_t>(k)].push_back(parse_element(ambient.generators(), item));
            } catch (const ParseError& e) {
                throw JobError(l.number, e.what());
            }
        }
    }
    try {
        return make_subcdga(ambient, std::move(bases), top);
    } catch (const SubCDGAError& e) {
        throw JobError(lines.empty() ? 0 : lines.front().number, e.what());
    } catch (const StructureError& e) {
        throw JobError(lines.empty() ? 0 : lines.front().number, e.what());
    }
}

inline std::string format_element_list(const std::vector<Element>& es) {
    std::string out = "[";
    for (std::size_t i = 0; i < es.size(); ++i) out += (i ? ", " : "") + format_element(es[i]);
    return out + "]";
}

inline std::string format_subcdga(const SubCDGA& s) {
    std::string out;
    for (int k = 0; k <= s.top(); ++k) out += "basis[" + std::to_string(k) + "] = " + format_element_list(s.basis(k)) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Morphisms: `map gen -> expr`.

inline std::map<std::string, Element> parse_assignments(const GeneratorSetPtr& source, const GeneratorSetPtr& target,
                                                        const std::vector<Line>& lines) {
    std::map<std::string, Element> out;
    for (const auto& l : lines) {
        const auto words = split_words(l.text);
        const auto arrow = l.text.find("->");
        if (words.empty() || words[0] != "map" || arrow == std::string::npos) throw JobError(l.number, "expected 'map gen -> expression'");
        const std::string name = trim(l.text.substr(3, arrow - 3));
        if (!source->find(name)) throw JobError(l.number, "unknown source generator '" + name + "'");
        if (out.count(name)) throw JobError(l.number, "generator '" + name + "' mapped twice");
        try {
            out.emplace(name, parse_element(target, l.text.substr(arrow + 2)));
        } catch (const ParseError& e) {
            throw JobError(l.number, e.what());
        }
    }
    return out;
}

}  // namespace text

// ---------------------------------------------------------------------------
// Job files

using JobObject = std::variant<LieAlgebra, CDGA, SubCDGA, MorphismSpec, AutomorphismSpec>;

struct Job {
    std::map<std::string, JobObject> objects;
    std::vector<std::string> run;  // command and arguments
    std::size_t run_line = 0;

    const JobObject* find(const std::string& name) const {
        auto it = objects.find(name);
        return it == objects.end() ? nullptr : &it->second;
    }

    // A CDGA view of a named object or preset: CDGAs as is, Lie algebras through CE.
    std::optional<CDGA> as_cdga(const std::string& name) const {
        if (const auto* o = find(name)) {
            if (const auto* a = std::get_if<CDGA>(o)) return *a;
            if (const auto* l = std::get_if<LieAlgebra>(o)) return chevalley_eilenberg(*l);
            return std::nullopt;
        }
        if (auto p = text::parse_lie_preset(name)) return chevalley_eilenberg(*p);
        return std::nullopt;
    }

    std::optional<LieAlgebra> as_lie(const std::string& name) const {
        if (const auto* o = find(name)) {
            if (const auto* l = std::get_if<LieAlgebra>(o)) return *l;
            return std::nullopt;
        }
        return text::parse_lie_preset(name);
    }

    // Complexes: sub-CDGAs as is, everything CDGA-like as its full algebra.
    std::optional<SubCDGA> as_complex(const std::string& name, std::optional<int> top) const {
        if (const auto* o = find(name))
            if (const auto* s = std::get_if<SubCDGA>(o)) return *s;
        if (auto a = as_cdga(name)) return SubCDGA::full(*a, top);
        return std::nullopt;
    }
};

namespace detail {

inline std::pair<CDGA, std::optional<SubCDGA>> resolve_algebra(const Job& job, const std::string& name, std::size_t line) {
    if (const auto* o = job.find(name))
        if (const auto* s = std::get_if<SubCDGA>(o)) return {s->ambient(), *s};
    if (auto a = job.as_cdga(name)) return {*a, std::nullopt};
    throw JobError(line, "'" + name + "' does not name a CDGA, sub-CDGA or Lie algebra");
}

template <class F>
auto with_line(std::size_t line, F&& f) {
    try {
        return f();
    } catch (const JobError&) {
        throw;
    } catch (const std::exception& e) {
        throw JobError(line, e.what());
    }
}

}  // namespace detail

inline Job parse_job(const std::vector<text::Line>& lines) {
    Job job;
    std::size_t i = 0;
    while (i < lines.size()) {
        const auto& head = lines[i];
        auto words = text::split_words(head.text);
        if (words[0] == "run") {
            if (!job.run.empty()) throw JobError(head.number, "only one 'run' line is allowed");
            job.run.assign(words.begin() + 1, words.end());
            if (job.run.empty()) throw JobError(head.number, "'run' needs a command");
            job.run_line = head.number;
            ++i;
            continue;
        }
        if (words[0] != "object" || words.size() < 3) throw JobError(head.number, "expected 'object <kind> <name> ... {' or 'run ...'");
        if (words.back() != "{") {
            if (words.back().back() == '{') {
                words.back().pop_back();
                words.push_back("{");
            } else {
                throw JobError(head.number, "object header must end with '{'");
            }
        }
        words.pop_back();
        const std::string kind = words[1], name = words[2];
        if (!job.run.empty()) throw JobError(head.number, "objects must precede the 'run' line");
        if (job.objects.count(name)) throw JobError(head.number, "object '" + name + "' defined twice");

        // Body up to the matching closing brace.
        std::vector<text::Line> body;
        int depth = 1;
        ++i;
        for (; i < lines.size(); ++i) {
            const auto& t = lines[i].text;
            if (t == "}" && --depth == 0) break;
            if (t.back() == '{') ++depth;
            body.push_back(lines[i]);
        }
        if (i == lines.size()) throw JobError(head.number, "unterminated object '" + name + "'");
        ++i;

        auto keyword = [&](const std::string& k) -> std::string {
            for (std::size_t w = 3; w + 1 < words.size(); ++w)
                if (words[w] == k) return words[w + 1];
            throw JobError(head.number, "object of kind '" + kind + "' needs '" + k + " <value>'");
        };

        JobObject obj = detail::with_line(head.number, [&]() -> JobObject {
            if (kind == "lie") return text::parse_lie(body);
            if (kind == "cdga") return text::parse_cdga(body);
            if (kind == "subcdga") {
                auto [ambient, sub] = detail::resolve_algebra(job, keyword("of"), head.number);
                if (sub) throw JobError(head.number, "a sub-CDGA must be taken of a free CDGA");
                return text::parse_subcdga(ambient, body);
            }
            if (kind == "morphism") {
                auto [src, domain] = detail::resolve_algebra(job, keyword("from"), head.number);
                auto [tgt_ambient, tgt_sub] = detail::resolve_algebra(job, keyword("to"), head.number);
                SubCDGA target = tgt_sub ? *tgt_sub : SubCDGA::full(tgt_ambient, tgt_ambient.top_degree());
                auto m = text::parse_assignments(src.generators(), target.generators(), body);
                return MorphismSpec::from_map(src, target, m, domain);
            }
            if (kind == "automorphism") {
                auto [a, sub] = detail::resolve_algebra(job, keyword("on"), head.number);
                if (sub) throw JobError(head.number, "automorphisms act on free CDGAs");
                int order = 0;
                try {
                    order = std::stoi(keyword("order"));
                } catch (const std::logic_error&) {
                    throw JobError(head.number, "invalid order");
                }
                auto m = text::parse_assignments(a.generators(), a.generators(), body);
                return AutomorphismSpec(MorphismSpec::from_map(a, SubCDGA::full(a, a.top_degree()), m), order);
            }
            throw JobError(head.number, "unknown object kind '" + kind + "'");
        });
        job.objects.emplace(name, std::move(obj));
    }
    return job;
}

inline Job parse_job(std::istream& in) { return parse_job(text::read_lines(in)); }
inline Job parse_job(const std::string& s) { return parse_job(text::read_lines(s)); }

}  // namespace hirsch
