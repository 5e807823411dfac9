#pragma once

// Finite-dimensional Lie algebras over Q given by structure constants.

#include "hirsch/cdga.hpp"
#include "hirsch/linalg.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hirsch {

class LieError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Basis e_0..e_{m-1} with [e_i, e_j] = sum_k c(i,j)[k] e_k, stored antisymmetrically.
class LieAlgebra {
public:
    LieAlgebra() = default;
    explicit LieAlgebra(std::size_t dim, std::vector<std::string> labels = {})
        : dim_(dim), brackets_(dim * dim, Vector(dim)), labels_(std::move(labels)) {
        if (labels_.empty())
            for (std::size_t i = 0; i < dim; ++i) labels_.push_back("e" + std::to_string(i + 1));
        if (labels_.size() != dim) throw LieError("label count does not match dimension");
    }

    std::size_t dimension() const { return dim_; }
    const std::vector<std::string>& labels() const { return labels_; }

    const Vector& bracket(std::size_t i, std::size_t j) const { return brackets_.at(i * dim_ + j); }

    // Sets [e_i, e_j] (and [e_j, e_i] = -[e_i, e_j]). A redundant assignment must agree.
    void set_bracket(std::size_t i, std::size_t j, const Vector& v) {
        if (i >= dim_ || j >= dim_) throw LieError("bracket index out of range");
        if (v.size() != dim_) throw LieError("bracket value has wrong length");
        if (i == j) {
            if (!is_zero(v)) throw LieError("[e_i, e_i] must vanish");
            return;
        }
        const auto& current = brackets_[i * dim_ + j];
        if (assigned_[key(i, j)] && current != v)
            throw LieError("inconsistent redundant bracket [" + labels_[i] + "," + labels_[j] + "]");
        brackets_[i * dim_ + j] = v;
        Vector neg = v;
        for (auto& x : neg) x = -x;
        brackets_[j * dim_ + i] = std::move(neg);
        assigned_[key(i, j)] = true;
    }

    Vector bracket(std::span<const Scalar> x, std::span<const Scalar> y) const {
        Vector out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (sgn(x[i]) == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (sgn(y[j]) == 0 || i == j) continue;
                const Scalar s = x[i] * y[j];
                const auto& b = bracket(i, j);
                for (std::size_t k = 0; k < dim_; ++k)
                    if (sgn(b[k]) != 0) out[k] += s * b[k];
            }
        }
        return out;
    }

    bool is_abelian() const {
        return std::all_of(brackets_.begin(), brackets_.end(), [](const Vector& v) { return is_zero(v); });
    }

    friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
        return a.dim_ == b.dim_ && a.brackets_ == b.brackets_;
    }

private:
    std::size_t key(std::size_t i, std::size_t j) const { return i < j ? i * dim_ + j : j * dim_ + i; }

    std::size_t dim_ = 0;
    std::vector<Vector> brackets_;
    std::vector<std::string> labels_;
    std::map<std::size_t, bool> assigned_;
};

inline Vector unit_vector(std::size_t n, std::size_t i) {
    Vector v(n);
    v.at(i) = 1;
    return v;
}

// Echelon-basis subspace of Q^n.
struct Subspace {
    std::size_t ambient = 0;
    std::vector<Vector> basis;

    static Subspace span(std::size_t n, const std::vector<Vector>& vs) { return {n, span_basis(n, vs)}; }
    std::size_t dimension() const { return basis.size(); }
    bool is_zero() const { return basis.empty(); }
};

// First basis triple (i < j < k) whose Jacobiator is nonzero.
inline std::optional<std::array<std::size_t, 3>> check_jacobi(const LieAlgebra& l) {
    const std::size_t m = l.dimension();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                const Vector ei = unit_vector(m, i), ej = unit_vector(m, j), ek = unit_vector(m, k);
                Vector s = l.bracket(ei, l.bracket(ej, ek));
                const Vector t = l.bracket(ej, l.bracket(ek, ei));
                const Vector u = l.bracket(ek, l.bracket(ei, ej));
                for (std::size_t x = 0; x < m; ++x) s[x] += t[x] + u[x];
                if (!is_zero(s)) return std::array{i, j, k};
            }
    return std::nullopt;
}

inline void require_valid(const LieAlgebra& l) {
    if (auto bad = check_jacobi(l))
        throw LieError("Jacobi identity fails on (" + l.labels()[(*bad)[0]] + ", " + l.labels()[(*bad)[1]] + ", " +
                       l.labels()[(*bad)[2]] + ")");
}

// [g, S] for a subspace S.
inline Subspace bracket_with_algebra(const LieAlgebra& l, const Subspace& s) {
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < l.dimension(); ++i)
        for (const auto& v : s.basis) vs.push_back(l.bracket(unit_vector(l.dimension(), i), v));
    return Subspace::span(l.dimension(), vs);
}

// g = g^1 > g^2 = [g,g] > g^3 = [g,g^2] > ... until the dimension stabilizes.
inline std::vector<Subspace> lower_central_series(const LieAlgebra& l) {
    const std::size_t m = l.dimension();
    std::vector<Vector> all;
    for (std::size_t i = 0; i < m; ++i) all.push_back(unit_vector(m, i));
    std::vector<Subspace> series{Subspace::span(m, all)};
    while (true) {
        Subspace next = bracket_with_algebra(l, series.back());
        const bool stable = next.dimension() == series.back().dimension();
        if (stable) break;
        series.push_back(std::move(next));
        if (series.back().is_zero()) break;
    }
    return series;
}

inline bool is_nilpotent(const LieAlgebra& l) { return lower_central_series(l).back().is_zero(); }

struct DerivedAndCenter {
    Subspace derived;
    Subspace center;
};

inline DerivedAndCenter derived_and_center(const LieAlgebra& l) {
    const std::size_t m = l.dimension();
    std::vector<Vector> brackets;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) brackets.push_back(l.bracket(i, j));
    // x is central iff sum_i x_i [e_i, e_j] = 0 for every j.
    Matrix ad(m * m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            const auto& b = l.bracket(i, j);
            for (std::size_t k = 0; k < m; ++k) ad(j * m + k, i) = b[k];
        }
    return {Subspace::span(m, brackets), Subspace::span(m, nullspace(ad))};
}

// Symplectic frame for an algebra with one-dimensional derived algebra <h>:
// [p_i, q_j] = delta_ij h, with u_1..u_r completing h to a basis of the center.
struct HeisenbergFrame {
    int l = 0;
    std::vector<Vector> p, q;
    Vector h;
    std::vector<Vector> u;

    // Columns p_1..p_l, q_1..q_l, h, u_1..u_r (the heisenberg_sum ordering).
    Matrix basis_change() const {
        std::vector<Vector> cols = p;
        cols.insert(cols.end(), q.begin(), q.end());
        cols.push_back(h);
        cols.insert(cols.end(), u.begin(), u.end());
        return Matrix::from_columns(h.size(), cols);
    }
};

namespace detail {

// Skew form (x, y) -> coefficient of [x, y] along w, where the derived algebra is <w>.
inline Scalar skew_form(const LieAlgebra& l, const Vector& w, std::size_t pivot, const Vector& x, const Vector& y) {
    return l.bracket(x, y)[pivot] / w[pivot];
}

inline std::size_t leading_index(const Vector& v) {
    std::size_t p = 0;
    while (p < v.size() && sgn(v[p]) == 0) ++p;
    return p;
}

}  // namespace detail

// Exact skew normal form by iterated hyperbolic-pair extraction.
inline HeisenbergFrame heisenberg_frame(const LieAlgebra& l) {
    const std::size_t m = l.dimension();
    const auto dc = derived_and_center(l);
    if (dc.derived.dimension() != 1) throw LieError("heisenberg_frame needs a one-dimensional derived algebra");
    const Vector w = dc.derived.basis.front();
    const std::size_t pivot = detail::leading_index(w);
    auto omega = [&](const Vector& x, const Vector& y) { return detail::skew_form(l, w, pivot, x, y); };

    HeisenbergFrame f;
    f.h = w;
    std::vector<Vector> rest;
    for (std::size_t i = 0; i < m; ++i) rest.push_back(unit_vector(m, i));
    while (true) {
        std::optional<std::pair<std::size_t, std::size_t>> pair;
        for (std::size_t a = 0; a < rest.size() && !pair; ++a)
            for (std::size_t b = a + 1; b < rest.size() && !pair; ++b)
                if (sgn(omega(rest[a], rest[b])) != 0) pair = {a, b};
        if (!pair) break;
        Vector p = rest[pair->first];
        Vector q = rest[pair->second];
        const Scalar s = omega(p, q);
        for (auto& x : q) x /= s;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pair->second));
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pair->first));
        for (auto& v : rest) {
            const Scalar a = omega(v, q), b = omega(v, p);
            for (std::size_t k = 0; k < m; ++k) v[k] += -a * p[k] + b * q[k];
        }
        f.p.push_back(std::move(p));
        f.q.push_back(std::move(q));
    }
    f.l = static_cast<int>(f.p.size());
    // The remaining vectors span the radical, which is the center; complete h to a basis of it.
    std::vector<Vector> chosen{w};
    for (const auto& v : rest) {
        std::vector<Vector> trial = chosen;
        trial.push_back(v);
        if (rank(Matrix::from_rows(m, trial)) == trial.size()) {
            chosen.push_back(v);
            f.u.push_back(v);
        }
    }
    if (2 * f.p.size() + 1 + f.u.size() != m) throw LieError("internal: symplectic frame does not span the algebra");
    return f;
}

// Some(l) iff nilpotent with dim [g,g] <= 1; l is half the rank of the bracket form.
inline std::optional<int> classify_heisenberg_type(const LieAlgebra& l) {
    require_valid(l);
    if (!is_nilpotent(l)) return std::nullopt;
    const auto dc = derived_and_center(l);
    if (dc.derived.dimension() == 0) return 0;
    if (dc.derived.dimension() > 1) return std::nullopt;
    const Vector& w = dc.derived.basis.front();
    const std::size_t pivot = detail::leading_index(w);
    const std::size_t m = l.dimension();
    Matrix form(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            form(i, j) = detail::skew_form(l, w, pivot, unit_vector(m, i), unit_vector(m, j));
    const std::size_t r = rank(form);
    if (r % 2 != 0) throw LieError("internal: skew form has odd rank");
    return static_cast<int>(r / 2);
}

// h(1,l) + a_r with basis p_1..p_l, q_1..q_l, h, u_1..u_r and [p_i, q_i] = h.
inline LieAlgebra heisenberg_sum(int l, int r) {
    if (l < 0 || r < 0) throw LieError("heisenberg_sum needs l, r >= 0");
    std::vector<std::string> labels;
    for (int i = 1; i <= l; ++i) labels.push_back("p" + std::to_string(i));
    for (int i = 1; i <= l; ++i) labels.push_back("q" + std::to_string(i));
    if (l > 0) labels.push_back("h");
    for (int i = 1; i <= r; ++i) labels.push_back("u" + std::to_string(i));
    const std::size_t m = labels.size();
    LieAlgebra g(m, std::move(labels));
    for (int i = 0; i < l; ++i)
        g.set_bracket(static_cast<std::size_t>(i), static_cast<std::size_t>(l + i), unit_vector(m, static_cast<std::size_t>(2 * l)));
    return g;
}

inline LieAlgebra abelian(int n) { return heisenberg_sum(0, n); }

// Structure constants in the basis f_a = sum_i P(i, a) e_i.
inline LieAlgebra change_basis(const LieAlgebra& l, const Matrix& p) {
    const std::size_t m = l.dimension();
    if (p.rows() != m || p.cols() != m) throw LieError("basis change has wrong shape");
    const auto inv = inverse(p);
    if (!inv) throw LieError("basis change matrix is singular");
    LieAlgebra out(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            const Vector br = l.bracket(p.column(a), p.column(b));
            out.set_bracket(a, b, *inv * br);
        }
    return out;
}

// Generator names of the Chevalley-Eilenberg algebra: a1..am.
inline std::vector<std::string> ce_generator_names(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back("a" + std::to_string(i));
    return names;
}

// (Lambda g^*, d) with d a^k = -sum_{i<j} c_ij^k a^i a^j.
inline CDGA chevalley_eilenberg(const LieAlgebra& l, std::vector<std::string> names = {}) {
    const std::size_t m = l.dimension();
    if (names.empty()) names = ce_generator_names(m);
    if (names.size() != m) throw LieError("generator name count does not match dimension");
    std::vector<Generator> gens;
    for (const auto& n : names) gens.push_back({n, 1});
    auto g = make_generators(std::move(gens));
    std::vector<Element> d(m, Element(g));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& c = l.bracket(i, j);
            const Element wedge = multiply(Element::generator(g, i), Element::generator(g, j));
            for (std::size_t k = 0; k < m; ++k)
                if (sgn(c[k]) != 0) d[k] -= wedge * c[k];
        }
    CDGA a(g, std::move(d));
    if (!a.has_d_squared_certificate()) {
        const auto& r = a.d_squared_report();
        throw LieError("d^2 != 0 on generator '" + names[*r.generator] + "': " + format_element(*r.residue));
    }
    return a;
}

}  // namespace hirsch
