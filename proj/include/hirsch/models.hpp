#pragma once

// Model constructions: Hirsch extensions, almost formal presentations and their
// index, the Chevalley decomposition isomorphism, mapping-torus models,
// quasi-isomorphism checks, and the rank of a degree-1 form.

#include "hirsch/cdga.hpp"
#include "hirsch/homology.hpp"
#include "hirsch/lie.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hirsch {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Re-expresses an element over a generator set that extends its own by appended generators.
inline Element extend_element(const Element& e, const GeneratorSetPtr& bigger) {
    const auto& small = *e.generators();
    if (bigger->size() < small.size()) throw StructureError("extend_element: target generator set is smaller");
    for (std::size_t i = 0; i < small.size(); ++i)
        if (!((*bigger)[i] == small[i])) throw StructureError("extend_element: generator sets do not share a prefix");
    Element out(bigger);
    for (const auto& [m, c] : e.terms()) {
        std::vector<std::uint32_t> x = m.exponents();
        x.resize(bigger->size(), 0);
        out.add_term(Monomial(std::move(x), m.degree()), c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Morphisms

// Algebra map out of a free CDGA, given on generators. `domain`, when set, restricts
// the source to a sub-CDGA; the target is a sub-CDGA (possibly the full algebra).
class MorphismSpec {
public:
    MorphismSpec() = default;
    MorphismSpec(CDGA source, SubCDGA target, std::vector<Element> images, std::optional<SubCDGA> domain = std::nullopt)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)), domain_(std::move(domain)) {
        const auto& g = *source_.generators();
        if (images_.size() != g.size()) throw ModelError("morphism needs one image per source generator");
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!same_generators(images_[i].generators(), target_.generators()))
                throw ModelError("image of '" + g[i].name + "' is not over the target algebra");
            if (!images_[i].is_homogeneous_of(g[i].degree))
                throw ModelError("image of '" + g[i].name + "' does not have degree " + std::to_string(g[i].degree));
        }
        if (domain_ && !same_generators(domain_->generators(), source_.generators()))
            throw ModelError("morphism domain is not a sub-CDGA of the source");
    }

    static MorphismSpec from_map(const CDGA& source, const SubCDGA& target, const std::map<std::string, Element>& m,
                                 std::optional<SubCDGA> domain = std::nullopt) {
        const auto& g = *source.generators();
        std::vector<Element> images(g.size(), Element(target.generators()));
        std::vector<bool> seen(g.size(), false);
        for (const auto& [name, e] : m) {
            const auto i = g.index_of(name);
            images[i] = e;
            seen[i] = true;
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!seen[i]) throw ModelError("morphism does not assign generator '" + g[i].name + "'");
        return MorphismSpec(source, target, std::move(images), std::move(domain));
    }

    const CDGA& source() const { return source_; }
    const SubCDGA& target() const { return target_; }
    const std::vector<Element>& images() const { return images_; }
    SubCDGA domain(std::optional<int> top = std::nullopt) const {
        return domain_ ? *domain_ : SubCDGA::full(source_, top);
    }

    Element apply(const Element& x) const {
        if (!same_generators(x.generators(), source_.generators())) throw ModelError("morphism applied to foreign element");
        Element out(target_.generators());
        for (const auto& [m, c] : x.terms()) {
            Element t = Element::scalar(target_.generators(), c);
            for (auto i : factor_list(m)) t = multiply(t, images_[i]);
            out += t;
        }
        return out;
    }
    Element operator()(const Element& x) const { return apply(x); }

    // First generator g with d(psi(g)) != psi(d g), with the residue.
    std::optional<std::pair<std::size_t, Element>> chain_map_violation() const {
        for (std::size_t i = 0; i < images_.size(); ++i) {
            Element r = target_.ambient().d(images_[i]) - apply(source_.d_of(i));
            if (!r.is_zero()) return std::pair{i, std::move(r)};
        }
        return std::nullopt;
    }

    void require_chain_map() const {
        if (auto v = chain_map_violation())
            throw ModelError("not a chain map on '" + (*source_.generators())[v->first].name +
                             "': d(psi(g)) - psi(d g) = " + format_element(v->second));
    }

private:
    CDGA source_;
    SubCDGA target_;
    std::vector<Element> images_;
    std::optional<SubCDGA> domain_;
};

inline MorphismSpec identity_morphism(const CDGA& a, std::optional<int> top = std::nullopt) {
    std::vector<Element> images;
    for (std::size_t i = 0; i < a.generators()->size(); ++i) images.push_back(Element::generator(a.generators(), i));
    return MorphismSpec(a, SubCDGA::full(a, top), std::move(images));
}

// psi o phi, both given on generators; psi's source must be phi's target ambient.
inline MorphismSpec compose(const MorphismSpec& psi, const MorphismSpec& phi) {
    if (!same_generators(psi.source().generators(), phi.target().generators()))
        throw ModelError("compose: morphisms are not composable");
    std::vector<Element> images;
    for (const auto& e : phi.images()) images.push_back(psi.apply(e));
    return MorphismSpec(phi.source(), psi.target(), std::move(images));
}

// A finite-order endomorphism of a free CDGA.
class AutomorphismSpec {
public:
    AutomorphismSpec(MorphismSpec map, int order) : map_(std::move(map)), order_(order) {
        if (order_ < 1) throw ModelError("automorphism order must be >= 1");
        if (!same_generators(map_.source().generators(), map_.target().generators()))
            throw ModelError("automorphism must map an algebra to itself");
        map_.require_chain_map();
        const auto& g = map_.source().generators();
        // phi^j on generators, j = 1..order
        std::vector<Element> cur;
        for (std::size_t i = 0; i < g->size(); ++i) cur.push_back(Element::generator(g, i));
        for (int j = 1; j <= order_; ++j) {
            for (auto& e : cur) e = map_.apply(e);
            bool identity = true;
            for (std::size_t i = 0; i < g->size() && identity; ++i) identity = cur[i] == Element::generator(g, i);
            if (identity && j < order_)
                throw ModelError("declared order " + std::to_string(order_) + " but the map has order " + std::to_string(j));
            if (!identity && j == order_)
                throw ModelError("the " + std::to_string(order_) + "-fold composite is not the identity");
        }
    }

    const MorphismSpec& map() const { return map_; }
    int order() const { return order_; }
    const CDGA& algebra() const { return map_.source(); }

private:
    MorphismSpec map_;
    int order_;
};

// ---------------------------------------------------------------------------
// Hirsch extensions

struct HirschGenerator {
    std::string name;
    int degree = 1;
    Element target;  // f(v), a cocycle of degree `degree + 1` in the base
};

namespace detail {

inline GeneratorSetPtr extended_generators(const GeneratorSet& base, const std::vector<HirschGenerator>& gens) {
    std::vector<Generator> all = base.generators();
    for (const auto& v : gens) {
        if (v.degree < 1 || v.degree % 2 == 0)
            throw ModelError("Hirsch generator '" + v.name + "' must have odd degree");
        if (base.find(v.name)) throw ModelError("Hirsch generator '" + v.name + "' collides with a base generator");
        all.push_back({v.name, v.degree});
    }
    try {
        return make_generators(std::move(all));
    } catch (const StructureError& e) {
        throw ModelError(e.what());
    }
}

inline CDGA extended_cdga(const CDGA& base, const std::vector<HirschGenerator>& gens, const GeneratorSetPtr& g) {
    std::vector<Element> d;
    for (std::size_t i = 0; i < base.generators()->size(); ++i) d.push_back(extend_element(base.d_of(i), g));
    for (const auto& v : gens) d.push_back(extend_element(v.target, g));
    return CDGA(g, std::move(d));
}

inline void check_hirsch_target(const CDGA& base, const HirschGenerator& v) {
    if (!same_generators(v.target.generators(), base.generators()))
        throw ModelError("f(" + v.name + ") is not an element of the base");
    if (!v.target.is_homogeneous_of(v.degree + 1))
        throw ModelError("f(" + v.name + ") must have degree " + std::to_string(v.degree + 1));
    const Element r = base.d(v.target);
    if (!r.is_zero()) throw ModelError("f(" + v.name + ") is not closed: d f = " + format_element(r));
}

}  // namespace detail

// (base (x) Lambda V, d v = f(v)) over a free CDGA.
inline CDGA hirsch_extend(const CDGA& base, const std::vector<HirschGenerator>& gens) {
    for (const auto& v : gens) detail::check_hirsch_target(base, v);
    auto g = detail::extended_generators(*base.generators(), gens);
    return detail::extended_cdga(base, gens, g);
}

// Hirsch extension of a sub-CDGA, realized inside the extended ambient algebra as
// the span of b * y_S for base basis elements b and products y_S of new generators.
inline SubCDGA hirsch_extend(const SubCDGA& base, const std::vector<HirschGenerator>& gens) {
    for (const auto& v : gens) {
        detail::check_hirsch_target(base.ambient(), v);
        if (!base.contains(v.target)) throw ModelError("f(" + v.name + ") does not lie in the base sub-CDGA");
    }
    if (auto bad = base.product_closure_violation()) throw ModelError("base sub-CDGA is not closed under products: " + *bad);
    auto g = detail::extended_generators(*base.generators(), gens);
    CDGA ambient = detail::extended_cdga(base.ambient(), gens, g);

    int extra = 0;
    for (const auto& v : gens) extra += v.degree;
    const int top = base.top() + extra;
    const std::size_t offset = base.generators()->size();
    std::vector<std::vector<Element>> bases(static_cast<std::size_t>(top + 1));
    for (std::size_t mask = 0; mask < (std::size_t{1} << gens.size()); ++mask) {
        Element ys = Element::one(g);
        int shift = 0;
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (mask & (std::size_t{1} << j)) {
                ys = multiply(ys, Element::generator(g, offset + j));
                shift += gens[j].degree;
            }
        for (int k = 0; k <= base.top(); ++k)
            for (const auto& b : base.basis(k))
                bases[static_cast<std::size_t>(k + shift)].push_back(multiply(extend_element(b, g), ys));
    }
    return make_subcdga(ambient, std::move(bases), top);
}

inline CDGA mapping_torus_model(const CDGA& base, const std::string& y = "y") {
    return hirsch_extend(base, {{y, 1, Element::zero(base.generators())}});
}

inline SubCDGA mapping_torus_model(const SubCDGA& base, const std::string& y = "y") {
    return hirsch_extend(base, {{y, 1, Element::zero(base.generators())}});
}

// Fixed points of a finite-order automorphism, per degree.
inline SubCDGA invariant_subcomplex(const AutomorphismSpec& phi, std::optional<int> top = std::nullopt) {
    const CDGA& a = phi.algebra();
    const int t = a.require_top(top);
    std::vector<std::vector<Element>> bases;
    for (int k = 0; k <= t; ++k) {
        const auto mons = degree_basis(*a.generators(), k);
        std::map<Monomial, std::size_t> row;
        for (std::size_t i = 0; i < mons.size(); ++i) row.emplace(mons[i], i);
        Matrix m(mons.size(), mons.size());
        for (std::size_t j = 0; j < mons.size(); ++j) {
            const Element img = phi.map().apply(Element(a.generators(), mons[j]));
            for (const auto& [mono, c] : img.terms()) m(row.at(mono), j) = c;
            m(j, j) -= 1;
        }
        std::vector<Element> basis;
        for (const auto& v : nullspace(m)) {
            Element e(a.generators());
            for (std::size_t i = 0; i < mons.size(); ++i) e.add_term(mons[i], v[i]);
            basis.push_back(std::move(e));
        }
        bases.push_back(std::move(basis));
    }
    return make_subcdga(a, std::move(bases), t);
}

// ---------------------------------------------------------------------------
// Almost formal presentations

// (A (x) Lambda<y>, dy = z) with A of zero differential, connected, and z in A_2.
struct AlmostFormalPresentation {
    SubCDGA a;
    Element z;
    std::string y;

    void validate() const {
        if (!z.is_homogeneous_of(2)) throw ModelError("z must be homogeneous of degree 2");
        if (a.dimension(0) != 1) throw ModelError("A is not connected: dim A_0 = " + std::to_string(a.dimension(0)));
        for (int k = 0; k <= a.top(); ++k)
            for (const auto& b : a.basis(k))
                if (!a.ambient().d(b).is_zero()) throw ModelError("A has nonzero differential on " + format_element(b));
        if (!a.contains(z)) throw ModelError("z does not lie in A");
    }

    // The model itself.
    SubCDGA model() const { return hirsch_extend(a, {{y, 1, z}}); }
};

// Largest l with z^l != 0 (with d = 0 on A this equals the power index of [z]).
inline int almost_formal_index(const AlmostFormalPresentation& p) {
    p.validate();
    int l = 0;
    Element power = Element::one(p.z.generators());
    while (true) {
        Element next = multiply(power, p.z);
        if (next.is_zero()) return l;
        power = std::move(next);
        ++l;
    }
}

// An almost formal presentation of CE(L), together with mutually inverse
// generator-level isomorphisms between its model and CE(L).
struct CEPresentation {
    AlmostFormalPresentation presentation;
    CDGA ce;
    CDGA model;           // (A (x) Lambda<y>, dy = z) as a free CDGA
    MorphismSpec to_ce;   // model -> CE(L)
    MorphismSpec from_ce; // CE(L) -> model
    Matrix basis_change;  // columns: the adapted basis of L in the original coordinates
};

inline std::optional<CEPresentation> ce_almost_formal_presentation(const LieAlgebra& l) {
    const auto kind = classify_heisenberg_type(l);
    if (!kind) return std::nullopt;
    const std::size_t m = l.dimension();
    if (m == 0) throw ModelError("the zero Lie algebra has no almost formal presentation");

    Matrix p;
    std::vector<std::string> names;  // names of the adapted dual basis, in basis-change column order
    std::string y;
    if (*kind == 0) {
        p = Matrix::identity(m);
        for (std::size_t i = 1; i <= m; ++i) names.push_back("u" + std::to_string(i));
        y = names.back();
    } else {
        const HeisenbergFrame f = heisenberg_frame(l);
        p = f.basis_change();
        if (!(change_basis(l, p) == heisenberg_sum(f.l, static_cast<int>(f.u.size()))))
            throw ModelError("internal: adapted basis does not realize the Heisenberg brackets");
        names = heisenberg_sum(f.l, static_cast<int>(f.u.size())).labels();
        y = "h";
    }
    const auto pinv = inverse(p);

    // A: the closed adapted generators, with zero differential.
    std::vector<Generator> agens;
    for (const auto& n : names)
        if (n != y) agens.push_back({n, 1});
    auto ag = make_generators(std::move(agens));
    CDGA a = CDGA::zero_differential(ag);
    Element z(ag);
    for (int i = 1; i <= *kind; ++i)
        z -= multiply(Element::generator(ag, "p" + std::to_string(i)), Element::generator(ag, "q" + std::to_string(i)));

    AlmostFormalPresentation pres{SubCDGA::full(a), z, y};
    CDGA model = hirsch_extend(a, {{y, 1, z}});
    CDGA ce = chevalley_eilenberg(l);
    const auto& cg = ce.generators();
    const auto& mg = model.generators();

    // Dual basis: f^a = sum_k Pinv(a, k) a_k, and a_k = sum_a P(k, a) f^a.
    std::map<std::string, Element> to, from;
    for (std::size_t col = 0; col < m; ++col) {
        Element img(cg);
        for (std::size_t k = 0; k < m; ++k) img += Element::generator(cg, k) * (*pinv)(col, k);
        to.emplace(names[col], std::move(img));
    }
    for (std::size_t k = 0; k < m; ++k) {
        Element img(mg);
        for (std::size_t col = 0; col < m; ++col) img += Element::generator(mg, names[col]) * p(k, col);
        from.emplace((*cg)[k].name, std::move(img));
    }
    auto to_ce = MorphismSpec::from_map(model, SubCDGA::full(ce), to);
    auto from_ce = MorphismSpec::from_map(ce, SubCDGA::full(model), from);
    to_ce.require_chain_map();
    from_ce.require_chain_map();
    return CEPresentation{std::move(pres), std::move(ce), std::move(model), std::move(to_ce), std::move(from_ce), std::move(p)};
}

// ---------------------------------------------------------------------------
// Chevalley decomposition: (B_D (x) Lambda<y>, dy = d eta) -> B, a + b y |-> a + b eta.

struct ChevalleyDecomposition {
    SubCDGA kernel;      // B_D
    SubCDGA model;       // B_D (x) Lambda<y> inside the extended ambient algebra
    MorphismSpec iso;    // model -> B, y |-> eta
    Derivation d;        // the contraction D
    Element eta;
    std::string y;
    std::vector<Matrix> forward;  // per degree: model basis -> B monomials
    std::vector<Matrix> backward; // per degree: B monomials -> model basis

    // b |-> D(eta b) (x) 1 + (-1)^{k-1} D(b) (x) y, for b homogeneous of degree k.
    Element inverse(const Element& b) const {
        const auto k = b.degree();
        const auto& g = model.generators();
        if (b.is_zero()) return Element(g);
        if (!k) throw ModelError("inverse: element is not homogeneous");
        const Element first = d.apply(multiply(eta, b));
        Element second = d.apply(b);
        if ((*k - 1) % 2 != 0) second *= Scalar(-1);
        return extend_element(first, g) + multiply(extend_element(second, g), Element::generator(g, y));
    }
};

inline ChevalleyDecomposition chevalley_decompose(const CDGA& b, const Derivation& dd, const Element& eta,
                                                  std::optional<int> top = std::nullopt, std::string y = "y") {
    const int t = b.require_top(top);
    if (dd.degree() != -1) throw ModelError("D must have degree -1");
    if (!same_generators(dd.generators(), b.generators()) || !same_generators(eta.generators(), b.generators()))
        throw ModelError("D and eta must live on B");
    if (!eta.is_homogeneous_of(1) || eta.is_zero()) throw ModelError("eta must be a nonzero degree-1 element");
    {
        const Element r = dd.apply(eta) - b.one();
        if (!r.is_zero()) throw ModelError("D(eta) != 1: D(eta) - 1 = " + format_element(r));
    }
    {
        const Derivation c = graded_commutator(dd, b.differential());
        for (std::size_t i = 0; i < c.values().size(); ++i)
            if (!c.value(i).is_zero())
                throw ModelError("[D, d] != 0 on '" + (*b.generators())[i].name + "': " + format_element(c.value(i)));
    }
    for (int k = 0; k <= t; ++k)
        for (const auto& m : degree_basis(*b.generators(), k)) {
            const Element r = dd.apply(dd.apply(Element(b.generators(), m)));
            if (!r.is_zero()) throw ModelError("D^2 != 0 on " + format_monomial(*b.generators(), m) + ": " + format_element(r));
        }
    while (b.generators()->find(y)) y += "'";

    SubCDGA kernel = kernel_subcdga(b, {dd}, t);
    SubCDGA model = hirsch_extend(kernel, {{y, 1, b.d(eta)}});
    std::map<std::string, Element> images;
    for (const auto& gen : b.generators()->generators()) images.emplace(gen.name, b.gen(gen.name));
    images.emplace(y, eta);
    MorphismSpec iso = MorphismSpec::from_map(model.ambient(), SubCDGA::full(b, t), images, model);
    iso.require_chain_map();

    ChevalleyDecomposition out{kernel, model, iso, dd, eta, y, {}, {}};
    const SubCDGA full = SubCDGA::full(b, t);
    for (int k = 0; k <= t; ++k) {
        const auto& mb = model.basis(k);
        const auto& bb = full.basis(k);
        Matrix fwd(bb.size(), mb.size());
        for (std::size_t j = 0; j < mb.size(); ++j) {
            auto c = full.coordinates(iso.apply(mb[j]), k);
            for (std::size_t i = 0; i < c->size(); ++i) fwd(i, j) = (*c)[i];
        }
        Matrix bwd(mb.size(), bb.size());
        for (std::size_t j = 0; j < bb.size(); ++j) {
            const Element pre = out.inverse(bb[j]);
            auto c = model.coordinates(pre, k);
            if (!c) throw ModelError("inverse image of " + format_element(bb[j]) + " leaves the model");
            for (std::size_t i = 0; i < c->size(); ++i) bwd(i, j) = (*c)[i];
        }
        out.forward.push_back(std::move(fwd));
        out.backward.push_back(std::move(bwd));
    }
    return out;
}

struct DecompositionCheck {
    bool mutually_inverse = true;
    bool forward_chain_map = true;
    bool backward_chain_map = true;
    bool ok() const { return mutually_inverse && forward_chain_map && backward_chain_map; }
};

// Both composites are identities and both maps commute with d, degree by degree.
inline DecompositionCheck verify_decomposition(const ChevalleyDecomposition& c) {
    DecompositionCheck out;
    const int t = static_cast<int>(c.forward.size()) - 1;
    const SubCDGA full = SubCDGA::full(c.iso.target().ambient(), t);
    for (int k = 0; k <= t; ++k) {
        const auto& f = c.forward[static_cast<std::size_t>(k)];
        const auto& g = c.backward[static_cast<std::size_t>(k)];
        if (!(f * g == Matrix::identity(f.rows())) || !(g * f == Matrix::identity(g.rows()))) out.mutually_inverse = false;
        if (k < t) {
            const Matrix db = boundary_matrix(full, k);
            const Matrix dm = boundary_matrix(c.model, k);
            const auto& f1 = c.forward[static_cast<std::size_t>(k + 1)];
            const auto& g1 = c.backward[static_cast<std::size_t>(k + 1)];
            if (!(f1 * dm == db * f)) out.forward_chain_map = false;
            if (!(g1 * db == dm * g)) out.backward_chain_map = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quasi-isomorphism check

struct QuasiIsoResult {
    bool quasi_iso = true;
    std::vector<Matrix> induced;  // H^k(source) -> H^k(target) in representative bases
    std::vector<std::size_t> source_betti, target_betti;
};

inline QuasiIsoResult check_quasi_iso(const MorphismSpec& psi, std::optional<int> top = std::nullopt) {
    psi.require_chain_map();
    const SubCDGA src = psi.domain();
    const SubCDGA& dst = psi.target();
    const int t = top ? *top : std::min(src.top(), dst.top());
    const Cohomology hs = cohomology(src, t);
    const Cohomology ht = cohomology(dst, t);
    QuasiIsoResult out;
    out.source_betti = hs.betti_numbers();
    out.target_betti = ht.betti_numbers();
    for (int k = 0; k <= t; ++k) {
        Matrix m(ht.betti(k), hs.betti(k));
        for (std::size_t j = 0; j < hs.betti(k); ++j) {
            const Element img = psi.apply(hs.representatives(k)[j]);
            if (!dst.contains(img))
                throw ModelError("image of " + format_element(hs.representatives(k)[j]) + " leaves the target");
            const CohomologyClass c = class_of(ht, img, k);
            for (std::size_t i = 0; i < c.coordinates().size(); ++i) m(i, j) = c.coordinates()[i];
        }
        if (m.rows() != m.cols() || rank(m) != m.rows()) out.quasi_iso = false;
        out.induced.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rank of a degree-1 form

struct FormRank {
    int p = 0;
    int rank() const { return 2 * p + 1; }
    bool eta_wedge_nonzero = false;  // eta (d eta)^p != 0
};

// Largest p <= max with (d eta)^p != 0 as an element.
inline FormRank rank_of_form(const CDGA& a, const Element& eta, std::optional<int> max = std::nullopt) {
    if (!same_generators(a.generators(), eta.generators())) throw ModelError("eta is not an element of the algebra");
    if (!eta.is_homogeneous_of(1) || eta.is_zero()) throw ModelError("eta must be a nonzero degree-1 element");
    const Element deta = a.d(eta);
    const int cap = max ? *max : std::numeric_limits<int>::max();
    FormRank r;
    Element power = a.one();
    while (r.p < cap) {
        Element next = multiply(power, deta);
        if (next.is_zero()) break;
        power = std::move(next);
        ++r.p;
    }
    r.eta_wedge_nonzero = !multiply(eta, power).is_zero();
    return r;
}

}  // namespace hirsch
