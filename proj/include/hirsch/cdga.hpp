#pragma once

// Differentials, derivations, graded commutators and sub-CDGAs of free CDGAs.

#include "hirsch/gca.hpp"
#include "hirsch/linalg.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hirsch {

// Linear map on a free graded-commutative algebra, determined by its values on
// generators and extended by the graded Leibniz rule.
class Derivation {
public:
    Derivation() = default;
    Derivation(GeneratorSetPtr g, int degree, std::vector<Element> values)
        : gens_(std::move(g)), degree_(degree), values_(std::move(values)) {
        if (values_.size() != gens_->size()) throw StructureError("derivation needs one value per generator");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            gens_check(values_[i]);
            if (!values_[i].is_homogeneous_of((*gens_)[i].degree + degree_))
                throw StructureError("derivation value on '" + (*gens_)[i].name + "' is not homogeneous of degree " +
                                     std::to_string((*gens_)[i].degree + degree_));
        }
    }

    static Derivation zero(GeneratorSetPtr g, int degree) {
        std::vector<Element> v(g->size(), Element(g));
        return Derivation(g, degree, std::move(v));
    }

    const GeneratorSetPtr& generators() const { return gens_; }
    int degree() const { return degree_; }
    const Element& value(std::size_t i) const { return values_.at(i); }
    const std::vector<Element>& values() const { return values_; }

    bool is_zero() const {
        return std::all_of(values_.begin(), values_.end(), [](const Element& e) { return e.is_zero(); });
    }

    Element apply(const Monomial& m) const {
        const auto& g = *gens_;
        Element out(gens_);
        std::vector<std::uint32_t> left(g.size(), 0);
        int left_degree = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::uint32_t e = m[i];
            if (e != 0 && !values_[i].is_zero()) {
                // m = L * g_i^e * R with L on lower indices and R on higher ones.
                std::vector<std::uint32_t> right(g.size(), 0);
                int right_degree = 0;
                for (std::size_t j = i + 1; j < g.size(); ++j) {
                    right[j] = m[j];
                    right_degree += static_cast<int>(m[j]) * g[j].degree;
                }
                std::vector<std::uint32_t> mid(g.size(), 0);
                mid[i] = e - 1;
                Element core(gens_, Monomial(mid, static_cast<int>(e - 1) * g[i].degree), Scalar(e));
                core = multiply(core, values_[i]);
                const bool flip = (degree_ % 2 != 0) && (left_degree % 2 != 0);
                Element term = multiply(Element(gens_, Monomial(left, left_degree), flip ? -1 : 1), core);
                term = multiply(term, Element(gens_, Monomial(std::move(right), right_degree)));
                out += term;
            }
            left[i] = e;
            left_degree += static_cast<int>(e) * g[i].degree;
        }
        return out;
    }

    Element apply(const Element& x) const {
        gens_check(x);
        Element out(gens_);
        for (const auto& [m, c] : x.terms()) out += apply(m) * c;
        return out;
    }

    Element operator()(const Element& x) const { return apply(x); }

private:
    void gens_check(const Element& x) const {
        if (!same_generators(gens_, x.generators())) throw StructureError("derivation applied to foreign element");
    }

    GeneratorSetPtr gens_;
    int degree_ = 0;
    std::vector<Element> values_;
};

inline Element apply_derivation(const Derivation& d, const Element& e) { return d.apply(e); }

// [D1, D2] = D1 D2 - (-1)^{k1 k2} D2 D1, returned through its generator values.
inline Derivation graded_commutator(const Derivation& a, const Derivation& b) {
    if (!same_generators(a.generators(), b.generators())) throw StructureError("commutator of derivations on different algebras");
    const bool sym = (a.degree() % 2 != 0) && (b.degree() % 2 != 0);
    std::vector<Element> v;
    v.reserve(a.generators()->size());
    for (std::size_t i = 0; i < a.generators()->size(); ++i) {
        const Element ab = a.apply(b.value(i));
        const Element ba = b.apply(a.value(i));
        v.push_back(sym ? ab + ba : ab - ba);
    }
    return Derivation(a.generators(), a.degree() + b.degree(), std::move(v));
}

struct DSquaredReport {
    bool ok = true;
    std::optional<std::size_t> generator;  // first offending generator
    std::optional<Element> residue;        // d(d(generator))
};

class CDGA {
public:
    CDGA() = default;

    // `differential[i]` is d of generator i; it must be homogeneous of degree deg+1.
    CDGA(GeneratorSetPtr g, std::vector<Element> differential)
        : d_(std::move(g), 1, std::move(differential)) {
        report_ = compute_d_squared();
    }

    // Differential given by name; omitted generators are closed.
    static CDGA from_map(GeneratorSetPtr g, const std::map<std::string, Element>& d) {
        std::vector<Element> v(g->size(), Element(g));
        for (const auto& [name, e] : d) v[g->index_of(name)] = e;
        return CDGA(std::move(g), std::move(v));
    }

    static CDGA zero_differential(GeneratorSetPtr g) {
        std::vector<Element> v(g->size(), Element(g));
        return CDGA(std::move(g), std::move(v));
    }

    const GeneratorSetPtr& generators() const { return d_.generators(); }
    const Derivation& differential() const { return d_; }
    const Element& d_of(std::size_t i) const { return d_.value(i); }
    Element d(const Element& e) const { return d_.apply(e); }
    const DSquaredReport& d_squared_report() const { return report_; }
    bool has_d_squared_certificate() const { return report_.ok; }
    bool has_zero_differential() const { return d_.is_zero(); }

    std::optional<int> top_degree() const { return generators()->top_degree(); }

    int require_top(std::optional<int> top) const {
        if (top) return *top;
        if (auto t = top_degree()) return *t;
        throw StructureError("an explicit top degree is required for algebras with even-degree generators");
    }

    Element element(std::string_view text) const { return parse_element(generators(), text); }
    Element one() const { return Element::one(generators()); }
    Element gen(std::string_view name) const { return Element::generator(generators(), name); }

private:
    DSquaredReport compute_d_squared() const {
        for (std::size_t i = 0; i < generators()->size(); ++i) {
            Element r = d_.apply(d_.value(i));
            if (!r.is_zero()) return {false, i, std::move(r)};
        }
        return {};
    }

    Derivation d_;
    DSquaredReport report_;
};

inline Element apply_differential(const CDGA& a, const Element& e) { return a.d(e); }
inline const DSquaredReport& check_d_squared(const CDGA& a) { return a.d_squared_report(); }

// Contraction i with i(g) = 1 on the named degree-1 generator and 0 elsewhere.
inline Derivation dual_contraction(const GeneratorSetPtr& g, std::string_view name) {
    const std::size_t idx = g->index_of(name);
    if ((*g)[idx].degree != 1) throw StructureError("contraction dual to '" + std::string(name) + "' needs a degree-1 generator");
    std::vector<Element> v(g->size(), Element(g));
    v[idx] = Element::one(g);
    return Derivation(g, -1, std::move(v));
}

// Degree -1 derivation given by a linear functional on degree-1 generators
// (weights[i] is the value on generator i); zero on higher-degree generators.
inline Derivation contraction(const GeneratorSetPtr& g, const Vector& weights) {
    if (weights.size() != g->size()) throw StructureError("contraction weights need one entry per generator");
    std::vector<Element> v(g->size(), Element(g));
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (sgn(weights[i]) == 0) continue;
        if ((*g)[i].degree != 1) throw StructureError("contractions pair only with degree-1 generators");
        v[i] = Element::scalar(g, weights[i]);
    }
    return Derivation(g, -1, std::move(v));
}

// Operations i_{a_1}, ..., i_{a_n} of an abelian Lie algebra on a CDGA.
class ContractionFamily {
public:
    struct Report {
        bool ok = true;
        std::string message;
    };

    ContractionFamily(CDGA a, std::vector<Derivation> contractions)
        : algebra_(std::move(a)), contractions_(std::move(contractions)) {
        for (const auto& c : contractions_) {
            if (c.degree() != -1) throw StructureError("contractions must have degree -1");
            if (!same_generators(c.generators(), algebra_.generators()))
                throw StructureError("contraction over a different algebra");
        }
    }

    std::size_t size() const { return contractions_.size(); }
    const Derivation& operator[](std::size_t j) const { return contractions_.at(j); }
    const CDGA& algebra() const { return algebra_; }

    // L_a = [i_a, d].
    Derivation lie_derivative(std::size_t j) const { return graded_commutator(contractions_.at(j), algebra_.differential()); }

    // i_a^2 = 0 on every monomial up to `top`, and [i_a, i_b] = 0 on generators.
    Report verify(int top) const {
        const auto& g = algebra_.generators();
        for (std::size_t j = 0; j < size(); ++j) {
            for (int k = 0; k <= top; ++k)
                for (const auto& m : degree_basis(*g, k)) {
                    Element x(g, m);
                    if (!contractions_[j].apply(contractions_[j].apply(x)).is_zero())
                        return {false, "i_" + std::to_string(j) + " squared is nonzero on " + format_element(x)};
                }
            for (std::size_t l = j; l < size(); ++l)
                if (!graded_commutator(contractions_[j], contractions_[l]).is_zero())
                    return {false, "[i_" + std::to_string(j) + ", i_" + std::to_string(l) + "] is nonzero"};
        }
        return {};
    }

    // Every L_a annihilates every generator.
    bool is_invariant() const {
        for (std::size_t j = 0; j < size(); ++j)
            if (!lie_derivative(j).is_zero()) return false;
        return true;
    }

private:
    CDGA algebra_;
    std::vector<Derivation> contractions_;
};

class SubCDGAError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A d-stable graded subspace of a free CDGA, truncated at degree `top`, with an
// explicit ordered basis per degree.
class SubCDGA {
public:
    SubCDGA() = default;

    const CDGA& ambient() const { return ambient_; }
    const GeneratorSetPtr& generators() const { return ambient_.generators(); }
    int top() const { return top_; }
    bool is_full() const { return full_; }

    const std::vector<Element>& basis(int k) const {
        static const std::vector<Element> empty;
        if (k < 0 || k > top_) return empty;
        return basis_[static_cast<std::size_t>(k)];
    }
    std::size_t dimension(int k) const { return basis(k).size(); }
    std::vector<std::size_t> dimensions() const {
        std::vector<std::size_t> out;
        for (int k = 0; k <= top_; ++k) out.push_back(dimension(k));
        return out;
    }

    // Coordinates of a degree-k element in basis(k), or nullopt if outside the span.
    std::optional<Vector> coordinates(const Element& e, int k) const {
        if (!same_generators(e.generators(), generators())) throw StructureError("element over a different algebra");
        if (!e.is_homogeneous_of(k)) return std::nullopt;
        if (k < 0 || k > top_) return e.is_zero() ? std::optional<Vector>(Vector{}) : std::nullopt;
        const auto& c = *coords_[static_cast<std::size_t>(k)];
        Vector rhs(c.monomials.size());
        for (const auto& [m, coef] : e.terms()) {
            auto it = c.monomials.find(m);
            if (it == c.monomials.end()) return std::nullopt;
            rhs[it->second] = coef;
        }
        if (full_) return rhs;
        return c.solver.solve(rhs);
    }

    bool contains(const Element& e) const {
        std::vector<int> degrees;
        for (const auto& [m, c] : e.terms())
            if (degrees.empty() || degrees.back() != m.degree()) degrees.push_back(m.degree());
        return std::all_of(degrees.begin(), degrees.end(),
                           [&](int k) { return coordinates(e.component(k), k).has_value(); });
    }

    Element combination(int k, std::span<const Scalar> coords) const {
        const auto& b = basis(k);
        if (coords.size() != b.size()) throw StructureError("coordinate vector length mismatch");
        Element out(generators());
        for (std::size_t i = 0; i < b.size(); ++i)
            if (sgn(coords[i]) != 0) out += b[i] * coords[i];
        return out;
    }

    // Every product of basis elements (within `top`) lies in the subspace.
    std::optional<std::string> product_closure_violation() const {
        for (int a = 0; a <= top_; ++a)
            for (int b = a; a + b <= top_; ++b)
                for (const auto& x : basis(a))
                    for (const auto& y : basis(b)) {
                        Element p = multiply(x, y);
                        if (!coordinates(p, a + b))
                            return "(" + format_element(x) + ")*(" + format_element(y) + ") = " + format_element(p);
                    }
        return std::nullopt;
    }

    // Unchecked construction; see make_subcdga.
    static SubCDGA from_bases(CDGA ambient, std::vector<std::vector<Element>> bases, int top, bool full = false) {
        SubCDGA s;
        s.ambient_ = std::move(ambient);
        s.top_ = top;
        s.full_ = full;
        bases.resize(static_cast<std::size_t>(top + 1));
        s.basis_ = std::move(bases);
        for (int k = 0; k <= top; ++k) s.coords_.push_back(std::make_shared<const DegreeCoords>(s.build_coords(k)));
        return s;
    }

    // The whole algebra (monomial basis) up to `top`.
    static SubCDGA full(const CDGA& a, std::optional<int> top = std::nullopt) {
        const int t = a.require_top(top);
        std::vector<std::vector<Element>> bases;
        for (int k = 0; k <= t; ++k) {
            std::vector<Element> row;
            for (const auto& m : degree_basis(*a.generators(), k)) row.emplace_back(a.generators(), m);
            bases.push_back(std::move(row));
        }
        return from_bases(a, std::move(bases), t, true);
    }

private:
    struct DegreeCoords {
        std::map<Monomial, std::size_t> monomials;
        LinearSolver solver;
    };

    DegreeCoords build_coords(int k) const {
        DegreeCoords c;
        const auto& b = basis_[static_cast<std::size_t>(k)];
        for (const auto& e : b) {
            if (!same_generators(e.generators(), generators())) throw StructureError("basis element over a different algebra");
            if (!e.is_homogeneous_of(k))
                throw SubCDGAError("basis element '" + format_element(e) + "' is not homogeneous of degree " + std::to_string(k));
            for (const auto& [m, coef] : e.terms()) c.monomials.try_emplace(m, 0);
        }
        std::size_t idx = 0;
        for (auto& [m, i] : c.monomials) i = idx++;
        if (!full_) {
            Matrix cols(c.monomials.size(), b.size());
            for (std::size_t j = 0; j < b.size(); ++j)
                for (const auto& [m, coef] : b[j].terms()) cols(c.monomials.at(m), j) = coef;
            c.solver = LinearSolver(cols);
            if (c.solver.rank() != b.size())
                throw SubCDGAError("basis of degree " + std::to_string(k) + " is linearly dependent");
        }
        return c;
    }

    CDGA ambient_;
    int top_ = -1;
    bool full_ = false;
    std::vector<std::vector<Element>> basis_;
    std::vector<std::shared_ptr<const DegreeCoords>> coords_;
};

// Validated sub-CDGA: homogeneous independent bases, unit in degree 0, d-stable.
// d-stability of the top degree is checked only when the ambient vanishes above top.
inline SubCDGA make_subcdga(const CDGA& a, std::vector<std::vector<Element>> bases, std::optional<int> top = std::nullopt) {
    const int t = top ? *top : (a.top_degree() ? *a.top_degree() : static_cast<int>(bases.size()) - 1);
    if (static_cast<int>(bases.size()) > t + 1) {
        for (std::size_t k = static_cast<std::size_t>(t + 1); k < bases.size(); ++k)
            if (!bases[k].empty()) throw SubCDGAError("basis given above top degree " + std::to_string(t));
        bases.resize(static_cast<std::size_t>(t + 1));
    }
    SubCDGA s = SubCDGA::from_bases(a, std::move(bases), t);
    if (!s.coordinates(a.one(), 0)) throw SubCDGAError("degree-0 basis must contain the unit");
    const auto ambient_top = a.top_degree();
    for (int k = 0; k <= t; ++k) {
        const bool checkable = k < t || (ambient_top && k + 1 > *ambient_top);
        if (!checkable) continue;
        for (const auto& b : s.basis(k)) {
            Element db = a.d(b);
            if (k + 1 > t ? !db.is_zero() : !s.coordinates(db, k + 1))
                throw SubCDGAError("not d-stable: d(" + format_element(b) + ") = " + format_element(db) +
                                   " leaves the span of degree " + std::to_string(k + 1));
        }
    }
    return s;
}

// Matrix of a degree-shifting derivation on monomial bases: columns indexed by
// degree_basis(k), rows by degree_basis(k + deg D).
inline Matrix derivation_matrix(const Derivation& d, int k) {
    const auto& g = *d.generators();
    const auto src = degree_basis(g, k);
    const auto dst = degree_basis(g, k + d.degree());
    std::map<Monomial, std::size_t> row_of;
    for (std::size_t i = 0; i < dst.size(); ++i) row_of.emplace(dst[i], i);
    Matrix m(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        const Element image = d.apply(src[j]);
        for (const auto& [mono, c] : image.terms()) m(row_of.at(mono), j) = c;
    }
    return m;
}

// Joint kernel of derivations commuting (in the graded sense) with d.
inline SubCDGA kernel_subcdga(const CDGA& a, const std::vector<Derivation>& ds, std::optional<int> top = std::nullopt) {
    const int t = a.require_top(top);
    for (std::size_t j = 0; j < ds.size(); ++j) {
        if (!same_generators(ds[j].generators(), a.generators())) throw StructureError("derivation over a different algebra");
        if (!graded_commutator(ds[j], a.differential()).is_zero())
            throw SubCDGAError("derivation #" + std::to_string(j) + " does not commute with d");
    }
    std::vector<std::vector<Element>> bases;
    for (int k = 0; k <= t; ++k) {
        const auto mons = degree_basis(*a.generators(), k);
        std::vector<Element> row;
        if (ds.empty()) {
            for (const auto& m : mons) row.emplace_back(a.generators(), m);
        } else {
            std::vector<Matrix> blocks;
            std::size_t rows = 0;
            for (const auto& d : ds) {
                blocks.push_back(derivation_matrix(d, k));
                rows += blocks.back().rows();
            }
            Matrix stacked(rows, mons.size());
            std::size_t r0 = 0;
            for (const auto& b : blocks) {
                for (std::size_t i = 0; i < b.rows(); ++i)
                    for (std::size_t j = 0; j < b.cols(); ++j) stacked(r0 + i, j) = b(i, j);
                r0 += b.rows();
            }
            for (const auto& v : nullspace(stacked)) {
                Element e(a.generators());
                for (std::size_t j = 0; j < mons.size(); ++j) e.add_term(mons[j], v[j]);
                row.push_back(std::move(e));
            }
        }
        bases.push_back(std::move(row));
    }
    return make_subcdga(a, std::move(bases), t);
}

}  // namespace hirsch
