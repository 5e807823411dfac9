#pragma once

// Per-degree cohomology over Q of CDGAs and sub-CDGAs.

#include "hirsch/cdga.hpp"
#include "hirsch/linalg.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace hirsch {

class CohomologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Matrix of d on degree k: columns indexed by basis(k), rows by basis(k+1).
// At k == top the rows are the ambient monomials hit by d, since basis(top+1) is not stored.
inline Matrix boundary_matrix(const SubCDGA& s, int k) {
    const auto& src = s.basis(k);
    const auto& a = s.ambient();
    if (k < s.top()) {
        Matrix m(s.dimension(k + 1), src.size());
        for (std::size_t j = 0; j < src.size(); ++j) {
            const Element db = a.d(src[j]);
            auto c = s.coordinates(db, k + 1);
            if (!c) throw SubCDGAError("not d-stable: d(" + format_element(src[j]) + ") = " + format_element(db));
            for (std::size_t i = 0; i < c->size(); ++i) m(i, j) = (*c)[i];
        }
        return m;
    }
    std::vector<Element> images;
    std::map<Monomial, std::size_t> rows;
    for (const auto& b : src) {
        images.push_back(a.d(b));
        for (const auto& [mono, c] : images.back().terms()) rows.try_emplace(mono, 0);
    }
    std::size_t i = 0;
    for (auto& [mono, r] : rows) r = i++;
    Matrix m(rows.size(), src.size());
    for (std::size_t j = 0; j < images.size(); ++j)
        for (const auto& [mono, c] : images[j].terms()) m(rows.at(mono), j) = c;
    return m;
}

inline Matrix boundary_matrix(const CDGA& a, int k) { return boundary_matrix(SubCDGA::full(a), k); }

class CohomologyClass;
class Cohomology;

inline Cohomology cohomology(const SubCDGA& s, std::optional<int> top = std::nullopt);

// Betti numbers, representative cocycles and class coordinates, per degree up to top.
class Cohomology {
public:
    struct Degree {
        std::size_t betti = 0;
        std::vector<Element> representatives;
        std::vector<Vector> representative_coords;  // in the source basis of this degree
        // Columns: representatives, then image basis. Factored on first use.
        struct Solver {
            std::size_t rows = 0;
            std::vector<Vector> cols;
            std::once_flag once;
            LinearSolver solver;
        };
        std::shared_ptr<Solver> class_solver;

        const LinearSolver& solver() const {
            std::call_once(class_solver->once, [&] {
                class_solver->solver = LinearSolver(Matrix::from_columns(class_solver->rows, class_solver->cols));
                class_solver->cols.clear();
            });
            return class_solver->solver;
        }
    };

    Cohomology() = default;

    const SubCDGA& source() const { return data_->source; }
    int top() const { return data_->top; }
    std::size_t betti(int k) const { return degree(k).betti; }
    std::vector<std::size_t> betti_numbers() const {
        std::vector<std::size_t> b;
        for (int k = 0; k <= top(); ++k) b.push_back(betti(k));
        return b;
    }
    const std::vector<Element>& representatives(int k) const { return degree(k).representatives; }

    const Degree& degree(int k) const {
        if (k < 0 || k > top()) throw CohomologyError("degree " + std::to_string(k) + " outside 0.." + std::to_string(top()));
        return data_->degrees[static_cast<std::size_t>(k)];
    }

    CohomologyClass class_of(const Element& z) const;
    CohomologyClass representative_class(int k, std::size_t i) const;
    CohomologyClass zero_class(int k) const;
    CohomologyClass unit() const;

    friend Cohomology cohomology(const SubCDGA& s, std::optional<int> top);

private:
    struct Data {
        SubCDGA source;
        int top = 0;
        std::vector<Degree> degrees;
    };
    std::shared_ptr<const Data> data_;
};

class CohomologyClass {
public:
    CohomologyClass(Cohomology h, int degree, Vector coords) : h_(std::move(h)), degree_(degree), coords_(std::move(coords)) {}

    int degree() const { return degree_; }
    const Vector& coordinates() const { return coords_; }
    const Cohomology& cohomology() const { return h_; }
    bool is_zero() const { return hirsch::is_zero(coords_); }

    // A cocycle in this class.
    Element representative() const {
        Element out(h_.source().generators());
        if (degree_ > h_.top()) return out;
        const auto& reps = h_.representatives(degree_);
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (sgn(coords_[i]) != 0) out += reps[i] * coords_[i];
        return out;
    }

    friend bool operator==(const CohomologyClass& a, const CohomologyClass& b) {
        return a.degree_ == b.degree_ && a.coords_ == b.coords_;
    }

private:
    Cohomology h_;
    int degree_;
    Vector coords_;
};

inline Cohomology cohomology(const SubCDGA& s, std::optional<int> top) {
    if (!s.ambient().has_d_squared_certificate()) {
        const auto& r = s.ambient().d_squared_report();
        throw CohomologyError("d^2 != 0 on generator '" + (*s.generators())[*r.generator].name +
                              "': " + format_element(*r.residue));
    }
    const int t = top ? *top : s.top();
    if (t > s.top()) throw CohomologyError("requested top degree exceeds the source's top degree");

    auto data = std::make_shared<Cohomology::Data>();
    data->source = s;
    data->top = t;

    Matrix previous;  // d_{k-1}
    for (int k = 0; k <= t; ++k) {
        const std::size_t n = s.dimension(k);
        const Matrix dk = boundary_matrix(s, k);
        const auto kernel = nullspace(dk);

        std::vector<Vector> image_cols;
        if (k > 0)
            for (std::size_t j = 0; j < previous.cols(); ++j) image_cols.push_back(previous.column(j));
        const auto image = span_basis(n, image_cols);

        // Reduce cocycles modulo the echelon image basis, then take an echelon basis of what remains.
        std::vector<std::size_t> image_pivots;
        for (const auto& row : image) {
            std::size_t p = 0;
            while (sgn(row[p]) == 0) ++p;
            image_pivots.push_back(p);
        }
        std::vector<Vector> reduced;
        for (Vector v : kernel) {
            for (std::size_t r = 0; r < image.size(); ++r) {
                const Scalar f = v[image_pivots[r]];
                if (sgn(f) == 0) continue;
                for (std::size_t j = 0; j < n; ++j) v[j] -= f * image[r][j];
            }
            reduced.push_back(std::move(v));
        }
        const auto reps = span_basis(n, reduced);

        if (reps.size() + image.size() != kernel.size())
            throw CohomologyError("internal rank mismatch in degree " + std::to_string(k));

        Cohomology::Degree deg;
        deg.betti = reps.size();
        deg.representative_coords = reps;
        for (const auto& c : reps) deg.representatives.push_back(s.combination(k, c));
        std::vector<Vector> cols = reps;
        cols.insert(cols.end(), image.begin(), image.end());
        deg.class_solver = std::make_shared<Cohomology::Degree::Solver>();
        deg.class_solver->rows = n;
        deg.class_solver->cols = std::move(cols);
        data->degrees.push_back(std::move(deg));
        previous = dk;
    }
    Cohomology h;
    h.data_ = std::move(data);
    return h;
}

inline Cohomology cohomology(const CDGA& a, std::optional<int> top = std::nullopt) {
    return cohomology(SubCDGA::full(a, top), top);
}

inline CohomologyClass Cohomology::class_of(const Element& z) const {
    const auto k = z.degree();
    if (z.is_zero()) throw CohomologyError("class_of(0) needs a degree; use zero_class(k)");
    if (!k) throw CohomologyError("class_of: element is not homogeneous");
    const Element dz = source().ambient().d(z);
    if (!dz.is_zero()) throw CohomologyError("not a cocycle: d(" + format_element(z) + ") = " + format_element(dz));
    if (*k > top()) throw CohomologyError("class_of: degree above top");
    auto coords = source().coordinates(z, *k);
    if (!coords) throw CohomologyError("element '" + format_element(z) + "' is not in the source complex");
    const auto& deg = degree(*k);
    auto x = deg.solver().solve(*coords);
    if (!x) throw CohomologyError("internal: cocycle outside representatives + image");
    x->resize(deg.betti);
    return CohomologyClass(*this, *k, std::move(*x));
}

inline CohomologyClass Cohomology::representative_class(int k, std::size_t i) const {
    Vector c(betti(k));
    c.at(i) = 1;
    return CohomologyClass(*this, k, std::move(c));
}

inline CohomologyClass Cohomology::zero_class(int k) const {
    return CohomologyClass(*this, k, Vector(k <= top() ? betti(k) : 0));
}

inline CohomologyClass Cohomology::unit() const { return class_of(source().ambient().one()); }

inline CohomologyClass class_of(const Cohomology& h, const Element& z, int k) {
    return z.is_zero() ? h.zero_class(k) : h.class_of(z);
}

// Product of classes via product of representatives.
inline CohomologyClass cup(const CohomologyClass& a, const CohomologyClass& b) {
    const Cohomology& h = a.cohomology();
    const int k = a.degree() + b.degree();
    const Element p = multiply(a.representative(), b.representative());
    if (p.is_zero()) return h.zero_class(k);
    if (k > h.top()) throw CohomologyError("cup product lands above the top degree");
    return h.class_of(p);
}

// Largest l <= max with c^l != 0; capped at floor(top / deg c).
inline int class_power_index(const CohomologyClass& c, int max) {
    if (c.degree() % 2 != 0) throw CohomologyError("class_power_index needs an even-degree class");
    if (max < 0) throw CohomologyError("class_power_index: max must be >= 0");
    if (c.is_zero() || c.degree() == 0) return c.is_zero() ? 0 : max;
    const int cap = std::min(max, c.cohomology().top() / c.degree());
    if (cap <= 0) return 0;
    CohomologyClass p = c;
    int l = 1;
    while (l < cap) {
        CohomologyClass next = cup(p, c);
        if (next.is_zero()) break;
        p = std::move(next);
        ++l;
    }
    return l;
}

}  // namespace hirsch
