#pragma once

// Shared fixtures for the test binaries: conversions between oracle data and
// library objects, and seeded random generators.

#include "hirsch/text.hpp"
#include "oracles.hpp"

#include <random>

namespace testing_support {

using namespace hirsch;

inline LieAlgebra to_lie(const oracle::Constants& k) {
    LieAlgebra g(k.m);
    for (std::size_t i = 0; i < k.m; ++i)
        for (std::size_t j = i + 1; j < k.m; ++j) {
            Vector v(k.m);
            for (std::size_t t = 0; t < k.m; ++t) v[t] = k.at(i, j, t);
            g.set_bracket(i, j, v);
        }
    return g;
}

inline Matrix to_matrix(const std::vector<std::vector<Scalar>>& rows) {
    const std::size_t n = rows.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    return m;
}

inline Scalar random_rational(std::mt19937& rng, int span = 3) {
    std::uniform_int_distribution<int> num(-span, span), den(1, 3);
    Scalar q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Scalar random_nonzero(std::mt19937& rng, int span = 3) {
    Scalar s = 0;
    while (s == 0) s = random_rational(rng, span);
    return s;
}

// Random homogeneous element of degree k (possibly zero).
inline Element random_element(const GeneratorSetPtr& g, int k, std::mt19937& rng, std::size_t max_terms = 6) {
    auto mons = degree_basis(*g, k);
    std::shuffle(mons.begin(), mons.end(), rng);
    Element e(g);
    std::bernoulli_distribution keep(0.6);
    for (std::size_t i = 0; i < mons.size() && i < max_terms; ++i)
        if (keep(rng)) e.add_term(mons[i], random_nonzero(rng));
    return e;
}

// A CDGA with odd and even generators whose d^2 vanishes by construction:
// a, b, x, y closed; dc = alpha x + beta a b; dz = gamma x^2 + delta x y + eps a b x.
inline CDGA random_mixed_cdga(std::mt19937& rng) {
    auto g = make_generators({{"a", 1}, {"b", 1}, {"c", 1}, {"x", 2}, {"y", 2}, {"z", 3}});
    std::map<std::string, Element> d;
    d.emplace("c", parse_element(g, "x") * random_rational(rng) + parse_element(g, "a*b") * random_rational(rng));
    d.emplace("z", parse_element(g, "x^2") * random_rational(rng) + parse_element(g, "x*y") * random_rational(rng) +
                       parse_element(g, "a*b*x") * random_rational(rng));
    return CDGA::from_map(g, d);
}

// Nilpotent algebras whose derived algebra has dimension >= 2.
inline std::vector<oracle::Constants> non_heisenberg_bases() {
    using namespace oracle;
    return {filiform(4),
            filiform(5),
            filiform(6),
            direct_sum(heisenberg(1, 0), heisenberg(1, 0)),
            direct_sum(heisenberg(1, 0), heisenberg(2, 1)),
            free_two_step(3),
            direct_sum(free_two_step(3), heisenberg(0, 1)),
            direct_sum(filiform(4), heisenberg(0, 2))};
}

// CE algebra of a random basis change of a random nilpotent fixture.
inline CDGA random_ce(std::mt19937& rng) {
    std::uniform_int_distribution<int> pick(0, 3), small(0, 2);
    oracle::Constants k;
    switch (pick(rng)) {
        case 0: k = oracle::heisenberg(small(rng) + 1, small(rng)); break;
        case 1: k = oracle::filiform(static_cast<std::size_t>(4 + small(rng))); break;
        case 2: k = oracle::free_two_step(3); break;
        default: k = oracle::direct_sum(oracle::heisenberg(1, 0), oracle::heisenberg(1, 0)); break;
    }
    return chevalley_eilenberg(change_basis(to_lie(k), to_matrix(oracle::random_unimodular(k.m, rng))));
}

}  // namespace testing_support
