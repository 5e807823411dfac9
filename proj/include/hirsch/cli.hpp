#pragma once

// Command dispatch for the batch front-end. Everything here returns text;
// the executable only handles flags, I/O and exit codes.

#include "hirsch/text.hpp"

#include <sstream>

namespace hirsch::cli {

enum class Format { plain, tsv };

struct Options {
    std::optional<int> top;
    Format format = Format::plain;
    std::string source = "<stdin>";  // used in error messages
};

struct Outcome {
    int exit_code = 0;
    std::string output;
};

class CommandError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// `key=value` arguments, plus the positional ones in order.
struct Args {
    std::vector<std::string> positional;
    std::map<std::string, std::string> named;

    static Args parse(const std::vector<std::string>& words, std::size_t from) {
        Args a;
        for (std::size_t i = from; i < words.size(); ++i) {
            const auto eq = words[i].find('=');
            if (eq != std::string::npos && eq > 0 && GeneratorSet::valid_name(words[i].substr(0, eq)))
                a.named[words[i].substr(0, eq)] = words[i].substr(eq + 1);
            else
                a.positional.push_back(words[i]);
        }
        return a;
    }

    std::optional<std::string> get(const std::string& key, std::size_t position) const {
        if (auto it = named.find(key); it != named.end()) return it->second;
        if (position < positional.size()) return positional[position];
        return std::nullopt;
    }

    std::string require(const std::string& key, std::size_t position) const {
        auto v = get(key, position);
        if (!v) throw CommandError("missing argument '" + key + "'");
        return *v;
    }
};

inline SubCDGA complex_of(const Job& job, const std::string& name, const Options& opt) {
    if (const auto* o = job.find(name))
        if (const auto* phi = std::get_if<AutomorphismSpec>(o))
            return mapping_torus_model(invariant_subcomplex(*phi, opt.top));
    if (const auto* o = job.find(name))
        if (const auto* s = std::get_if<SubCDGA>(o)) return *s;
    auto a = job.as_cdga(name);
    if (!a) throw CommandError("'" + name + "' does not name a CDGA, sub-CDGA, Lie algebra or automorphism");
    if (const auto& r = a->d_squared_report(); !r.ok)
        throw CommandError("d^2 != 0 on generator '" + (*a->generators())[*r.generator].name +
                           "': " + format_element(*r.residue));
    return SubCDGA::full(*a, a->require_top(opt.top));
}

inline LieAlgebra lie_of(const Job& job, const std::string& name) {
    auto l = job.as_lie(name);
    if (!l) throw CommandError("'" + name + "' does not name a Lie algebra");
    require_valid(*l);
    return *l;
}

inline void write_basis_lines(std::ostream& out, const std::string& label, const SubCDGA& s, Format f) {
    for (int k = 0; k <= s.top(); ++k) {
        if (f == Format::tsv)
            out << label << '\t' << k << '\t' << s.dimension(k) << '\t' << text::format_element_list(s.basis(k)) << '\n';
        else
            out << label << '[' << k << "]: dim=" << s.dimension(k) << ", basis=" << text::format_element_list(s.basis(k)) << '\n';
    }
}

inline void write_betti(std::ostream& out, const std::vector<std::size_t>& b, Format f) {
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (f == Format::tsv)
            out << k << '\t' << b[k] << '\n';
        else
            out << "b[" << k << "]=" << b[k] << '\n';
    }
}

inline int top_for(const SubCDGA& s, const Options& opt) {
    if (opt.top && *opt.top > s.top())
        throw CommandError("--top " + std::to_string(*opt.top) + " exceeds the object's top degree " + std::to_string(s.top()));
    return opt.top ? *opt.top : s.top();
}

inline Element parse_in(const GeneratorSetPtr& g, const std::string& text) {
    try {
        return parse_element(g, text);
    } catch (const ParseError& e) {
        throw CommandError(std::string(e.what()) + " in '" + text + "'");
    }
}

}  // namespace detail

// Runs one command (with arguments) against a parsed job.
inline std::string execute(const Job& job, const std::vector<std::string>& command, const Options& opt) {
    using namespace detail;
    if (command.empty()) throw CommandError("no command given");
    const std::string& cmd = command[0];
    const Args args = Args::parse(command, 1);
    std::ostringstream out;

    if (cmd == "betti") {
        const SubCDGA s = complex_of(job, args.require("object", 0), opt);
        write_betti(out, cohomology(s, top_for(s, opt)).betti_numbers(), opt.format);
    } else if (cmd == "cohomology") {
        const SubCDGA s = complex_of(job, args.require("object", 0), opt);
        const Cohomology h = cohomology(s, top_for(s, opt));
        for (int k = 0; k <= h.top(); ++k) {
            const auto reps = text::format_element_list(h.representatives(k));
            if (opt.format == Format::tsv)
                out << k << '\t' << h.betti(k) << '\t' << reps << '\n';
            else
                out << "H^" << k << ": dim=" << h.betti(k) << ", reps=" << reps << '\n';
        }
    } else if (cmd == "classify") {
        const LieAlgebra l = lie_of(job, args.require("object", 0));
        if (auto t = classify_heisenberg_type(l))
            out << "HEISENBERG_TYPE l=" << *t << " m=" << l.dimension() << '\n';
        else
            out << "NOT_ALMOST_FORMAL\n";
    } else if (cmd == "index") {
        const LieAlgebra l = lie_of(job, args.require("object", 0));
        if (l.dimension() == 0) throw CommandError("the zero Lie algebra has no almost formal presentation");
        if (auto p = ce_almost_formal_presentation(l))
            out << "INDEX: " << almost_formal_index(p->presentation) << '\n';
        else
            out << "NOT_ALMOST_FORMAL\n";
    } else if (cmd == "presentation") {
        const LieAlgebra l = lie_of(job, args.require("object", 0));
        auto p = ce_almost_formal_presentation(l);
        if (!p) {
            out << "NOT_ALMOST_FORMAL\n";
        } else {
            write_basis_lines(out, "A", p->presentation.a, opt.format);
            out << "d " << p->presentation.y << " = " << format_element(p->presentation.z) << '\n';
            out << "INDEX: " << almost_formal_index(p->presentation) << '\n';
        }
    } else if (cmd == "rank") {
        const std::string name = args.require("object", 0);
        auto a = job.as_cdga(name);
        if (!a) throw CommandError("'" + name + "' does not name a CDGA or Lie algebra");
        const Element eta = parse_in(a->generators(), args.require("eta", 1));
        const FormRank r = rank_of_form(*a, eta, opt.top);
        out << "RANK: " << r.rank() << " (p=" << r.p << ")\n";
    } else if (cmd == "qiso") {
        const std::string name = args.require("object", 0);
        const auto* o = job.find(name);
        const auto* m = o ? std::get_if<MorphismSpec>(o) : nullptr;
        if (!m) throw CommandError("'" + name + "' does not name a morphism");
        const auto r = check_quasi_iso(*m, opt.top);
        out << "QISO: " << (r.quasi_iso ? "yes" : "no") << '\n';
    } else if (cmd == "mapping_torus") {
        const std::string name = args.require("object", 0);
        const auto* o = job.find(name);
        const auto* phi = o ? std::get_if<AutomorphismSpec>(o) : nullptr;
        if (!phi) throw CommandError("'" + name + "' does not name an automorphism");
        const SubCDGA inv = invariant_subcomplex(*phi, opt.top);
        const SubCDGA model = mapping_torus_model(inv, args.get("y", 1).value_or("y"));
        write_basis_lines(out, "invariant", inv, opt.format);
        write_betti(out, cohomology(model).betti_numbers(), opt.format);
    } else if (cmd == "decompose") {
        const std::string name = args.require("object", 0);
        auto b = job.as_cdga(name);
        if (!b) throw CommandError("'" + name + "' does not name a CDGA or Lie algebra");
        const std::string along = args.require("contract", 1);
        if (!b->generators()->find(along)) throw CommandError("unknown generator '" + along + "' for contract=");
        const Element eta = parse_in(b->generators(), args.get("eta", 2).value_or(along));
        const auto c = chevalley_decompose(*b, dual_contraction(b->generators(), along), eta, opt.top,
                                           args.get("y", 3).value_or("y"));
        write_basis_lines(out, "kernel", c.kernel, opt.format);
        out << "DECOMPOSITION: " << (verify_decomposition(c).ok() ? "ok" : "failed") << '\n';
    } else if (cmd == "check") {
        const std::string name = args.require("object", 0);
        const auto* o = job.find(name);
        if (o && std::holds_alternative<MorphismSpec>(*o)) {
            auto v = std::get<MorphismSpec>(*o).chain_map_violation();
            if (v)
                out << "CHAIN_MAP: no (" << (*std::get<MorphismSpec>(*o).source().generators())[v->first].name
                    << ": " << format_element(v->second) << ")\n";
            else
                out << "CHAIN_MAP: yes\n";
        } else if (o && std::holds_alternative<AutomorphismSpec>(*o)) {
            out << "AUTOMORPHISM: ok (order " << std::get<AutomorphismSpec>(*o).order() << ")\n";
        } else if (o && std::holds_alternative<SubCDGA>(*o)) {
            const auto& s = std::get<SubCDGA>(*o);
            auto bad = s.product_closure_violation();
            out << "D2: " << (s.ambient().has_d_squared_certificate() ? "ok" : "fails") << '\n';
            out << "PRODUCT_CLOSED: " << (bad ? "no (" + *bad + ")" : std::string("yes")) << '\n';
        } else if (auto l = job.as_lie(name)) {
            auto bad = check_jacobi(*l);
            if (bad)
                out << "JACOBI: fails on (" << l->labels()[(*bad)[0]] << ", " << l->labels()[(*bad)[1]] << ", "
                    << l->labels()[(*bad)[2]] << ")\n";
            else
                out << "JACOBI: ok\n";
        } else if (auto a = job.as_cdga(name)) {
            const auto& r = a->d_squared_report();
            if (r.ok)
                out << "D2: ok\n";
            else
                out << "D2: fails on " << (*a->generators())[*r.generator].name << " (d^2 = " << format_element(*r.residue) << ")\n";
        } else {
            throw CommandError("unknown object '" + name + "'");
        }
    } else if (cmd == "print") {
        const std::string name = args.require("object", 0);
        const auto* o = job.find(name);
        if (o && std::holds_alternative<SubCDGA>(*o)) {
            out << text::format_subcdga(std::get<SubCDGA>(*o));
        } else if (auto a = job.as_cdga(name)) {
            out << text::format_cdga(*a);
        } else if (o && std::holds_alternative<MorphismSpec>(*o)) {
            const auto& m = std::get<MorphismSpec>(*o);
            for (std::size_t i = 0; i < m.images().size(); ++i)
                out << "map " << (*m.source().generators())[i].name << " -> " << format_element(m.images()[i]) << '\n';
        } else if (o && std::holds_alternative<AutomorphismSpec>(*o)) {
            const auto& m = std::get<AutomorphismSpec>(*o).map();
            for (std::size_t i = 0; i < m.images().size(); ++i)
                out << "map " << (*m.source().generators())[i].name << " -> " << format_element(m.images()[i]) << '\n';
        } else {
            throw CommandError("unknown object '" + name + "'");
        }
    } else {
        throw CommandError("unknown command '" + cmd + "'");
    }
    return out.str();
}

// Parses a job and runs its command (or `override_command` when non-empty).
// Errors become a single `ERROR:` line and a nonzero exit code.
inline Outcome run(const std::string& job_text, const Options& opt, const std::vector<std::string>& override_command = {}) {
    std::size_t line = 0;
    try {
        const Job job = parse_job(job_text);
        const auto& command = override_command.empty() ? job.run : override_command;
        if (command.empty()) throw CommandError("no 'run' line and no command given");
        line = override_command.empty() ? job.run_line : 0;
        return {0, execute(job, command, opt)};
    } catch (const JobError& e) {
        return {1, "ERROR: " + opt.source + ": " + e.what() + "\n"};
    } catch (const std::exception& e) {
        const std::string where = line ? opt.source + ": line " + std::to_string(line) : opt.source;
        return {1, "ERROR: " + where + ": " + e.what() + "\n"};
    }
}

}  // namespace hirsch::cli
