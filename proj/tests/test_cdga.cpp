#include "hirsch/lie.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hirsch;
using namespace testing_support;

namespace {

// CE(h(1,1)) with generators a1 = p*, a2 = q*, a3 = h*.
CDGA heis() { return chevalley_eilenberg(heisenberg_sum(1, 0)); }

std::vector<std::string> formatted(const std::vector<Element>& es) {
    std::vector<std::string> out;
    for (const auto& e : es) out.push_back(format_element(e));
    return out;
}

}  // namespace

TEST(Differential, HeisenbergExamples) {
    const CDGA a = heis();
    EXPECT_EQ(format_element(a.d(a.gen("a3"))), "-a1*a2");
    EXPECT_TRUE(a.d(a.element("a1*a3")).is_zero());
    EXPECT_TRUE(a.d(a.one()).is_zero());
    EXPECT_TRUE(a.d(a.element("5")).is_zero());
    EXPECT_TRUE(a.has_d_squared_certificate());
}

TEST(Differential, DegreeMismatchRejectedBeforeDSquared) {
    auto g = make_generators({{"x", 1}, {"y", 1}});
    EXPECT_THROW(CDGA::from_map(g, {{"x", parse_element(g, "y")}, {"y", parse_element(g, "x")}}), StructureError);
}

TEST(Differential, ExampleDifferentialPasses) {
    auto g = make_generators({{"al1", 1}, {"al2", 1}, {"al3", 1}});
    const CDGA a = CDGA::from_map(g, {{"al3", parse_element(g, "-al1*al2")}});
    EXPECT_TRUE(check_d_squared(a).ok);
}

TEST(Differential, DSquaredFailureIsReported) {
    auto g = make_generators({{"a", 1}, {"b", 2}});
    const CDGA a = CDGA::from_map(g, {{"a", parse_element(g, "b")}, {"b", parse_element(g, "a*b")}});
    const auto& r = check_d_squared(a);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.generator.has_value());
    EXPECT_EQ(*r.generator, 0u);
    EXPECT_EQ(format_element(*r.residue), "a*b");
}

TEST(Derivation, ContractionExamples) {
    const CDGA a = heis();
    const Derivation ih = dual_contraction(a.generators(), "a3");
    EXPECT_EQ(ih.apply(a.gen("a3")), a.one());
    EXPECT_EQ(format_element(ih.apply(a.element("a1*a3"))), "-a1");
    EXPECT_TRUE(ih.apply(a.element("a1*a2")).is_zero());
    EXPECT_THROW(dual_contraction(make_generators({{"x", 2}}), "x"), StructureError);
}

TEST(Derivation, CommutatorExamples) {
    const CDGA a = heis();
    const Derivation ih = dual_contraction(a.generators(), "a3");
    EXPECT_TRUE(graded_commutator(ih, a.differential()).is_zero());  // h is central
    EXPECT_TRUE(graded_commutator(ih, ih).is_zero());
    EXPECT_TRUE(graded_commutator(a.differential(), a.differential()).is_zero());
    const Derivation i1 = dual_contraction(a.generators(), "a1");
    // L_{e1}(a3) = i1(-a1 a2) = -a2 is nonzero: e1 is not central
    const Derivation l1 = graded_commutator(i1, a.differential());
    EXPECT_EQ(format_element(l1.apply(a.gen("a3"))), "-a2");
}

TEST(Derivation, MixedDegreeContractionIsZeroOnEvenGenerators) {
    auto g = make_generators({{"a", 1}, {"x", 2}});
    const Derivation i = dual_contraction(g, "a");
    EXPECT_EQ(i.apply(parse_element(g, "a*x^2")), parse_element(g, "x^2"));
    EXPECT_THROW(contraction(g, Vector{0, 1}), StructureError);
}

TEST(ContractionFamily, VerifiesAndDetectsInvariance) {
    const CDGA a = heis();
    ContractionFamily central(a, {dual_contraction(a.generators(), "a3")});
    EXPECT_TRUE(central.verify(3).ok);
    EXPECT_TRUE(central.is_invariant());
    ContractionFamily both(a, {dual_contraction(a.generators(), "a1"), dual_contraction(a.generators(), "a3")});
    EXPECT_TRUE(both.verify(3).ok);
    EXPECT_FALSE(both.is_invariant());
}

TEST(SubCDGA, ValidExamples) {
    const CDGA a = heis();
    const SubCDGA inv = make_subcdga(a, {{a.one()}, {a.gen("a3")}, {a.element("a1*a2")}, {a.element("a1*a2*a3")}});
    EXPECT_EQ(inv.dimensions(), (std::vector<std::size_t>{1, 1, 1, 1}));
    EXPECT_TRUE(inv.contains(a.element("2*a1*a2")));
    EXPECT_FALSE(inv.contains(a.gen("a1")));
    EXPECT_FALSE(inv.product_closure_violation().has_value());
    const SubCDGA small = make_subcdga(a, {{a.one()}, {a.gen("a1")}});
    EXPECT_EQ(small.dimension(1), 1u);
}

TEST(SubCDGA, Rejections) {
    const CDGA a = heis();
    // d a3 = -a1 a2 has nowhere to go
    EXPECT_THROW(make_subcdga(a, {{a.one()}, {a.gen("a3")}}), SubCDGAError);
    // unit missing
    EXPECT_THROW(make_subcdga(a, {{}, {a.gen("a1")}}), SubCDGAError);
    // dependent basis
    EXPECT_THROW(make_subcdga(a, {{a.one()}, {a.gen("a1"), a.element("2*a1")}}), SubCDGAError);
    // wrong degree
    EXPECT_THROW(make_subcdga(a, {{a.one()}, {a.element("a1*a2")}}), SubCDGAError);
}

TEST(SubCDGA, CoordinatesAndCombinations) {
    const CDGA a = heis();
    const SubCDGA full = SubCDGA::full(a);
    const Element e = a.element("3*a1*a2 - 1/2*a2*a3");
    const auto c = full.coordinates(e, 2);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(full.combination(2, *c), e);
    EXPECT_FALSE(full.coordinates(e, 1).has_value());
}

TEST(KernelSubCDGA, Examples) {
    const CDGA a = heis();
    const SubCDGA k = kernel_subcdga(a, {dual_contraction(a.generators(), "a3")});
    EXPECT_EQ(formatted(k.basis(0)), (std::vector<std::string>{"1"}));
    EXPECT_EQ(formatted(k.basis(1)), (std::vector<std::string>{"a1", "a2"}));
    EXPECT_EQ(formatted(k.basis(2)), (std::vector<std::string>{"a1*a2"}));
    EXPECT_TRUE(k.basis(3).empty());

    const SubCDGA none = kernel_subcdga(a, {});
    EXPECT_EQ(none.dimensions(), (std::vector<std::size_t>{1, 3, 3, 1}));

    const CDGA t = chevalley_eilenberg(abelian(2));
    const SubCDGA kt = kernel_subcdga(t, {dual_contraction(t.generators(), "a1")});
    EXPECT_EQ(formatted(kt.basis(1)), (std::vector<std::string>{"a2"}));
    EXPECT_TRUE(kt.basis(2).empty());
}

TEST(KernelSubCDGA, RequiresCommutingWithD) {
    const CDGA a = heis();
    EXPECT_THROW(kernel_subcdga(a, {dual_contraction(a.generators(), "a1")}), SubCDGAError);
}

TEST(KernelSubCDGA, ResultRevalidates) {
    for (int t = 0; t < 10; ++t) {
        const CDGA a = chevalley_eilenberg(heisenberg_sum(1 + t % 2, t % 3));
        const SubCDGA k = kernel_subcdga(a, {dual_contraction(a.generators(), t % 2 ? "a5" : "a3")});
        std::vector<std::vector<Element>> bases;
        for (int d = 0; d <= k.top(); ++d) bases.push_back(k.basis(d));
        EXPECT_NO_THROW(make_subcdga(a, bases, k.top()));
    }
}

TEST(Properties, LeibnizDSquaredAndCommutators) {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> deg(0, 3);
    for (int t = 0; t < 60; ++t) {
        const CDGA a = t % 2 ? random_mixed_cdga(rng) : random_ce(rng);
        ASSERT_TRUE(a.has_d_squared_certificate());
        const auto& g = a.generators();
        Vector w(g->size());
        for (std::size_t i = 0; i < g->size(); ++i)
            if ((*g)[i].degree == 1) w[i] = random_rational(rng);
        const Derivation i = contraction(g, w);
        for (int s = 0; s < 5; ++s) {
            const int k = deg(rng), l = deg(rng);
            const Element x = random_element(g, k, rng), y = random_element(g, l, rng);
            const Scalar sign = k % 2 ? -1 : 1;
            EXPECT_EQ(a.d(x * y), a.d(x) * y + sign * (x * a.d(y)));
            EXPECT_EQ(i.apply(x * y), i.apply(x) * y + sign * (x * i.apply(y)));
            EXPECT_TRUE(a.d(a.d(x)).is_zero());
            const Derivation c = graded_commutator(i, a.differential());
            EXPECT_EQ(c.apply(x), i.apply(a.d(x)) + a.d(i.apply(x)));
        }
    }
}
