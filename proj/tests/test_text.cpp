#include "hirsch/text.hpp"

#include <gtest/gtest.h>

using namespace hirsch;

TEST(TextCDGA, ParsesSectionsWithOrWithoutBraces) {
    const CDGA a = text::parse_cdga("generators\n x : 1\n y : 1\n z : 1\nd\n z -> x*y\n");
    EXPECT_EQ(format_element(a.d(a.gen("z"))), "x*y");
    const CDGA b = text::parse_cdga("generators {\n x : 1\n w : 2\n}\nd {\n x -> w\n}\n");
    EXPECT_EQ(format_element(b.d(b.gen("x"))), "w");
    EXPECT_EQ(text::format_cdga(a), "generators\n  x : 1\n  y : 1\n  z : 1\nd\n  z -> x*y\n");
    // formatting round-trips
    const CDGA c = text::parse_cdga(text::format_cdga(a));
    EXPECT_EQ(text::format_cdga(c), text::format_cdga(a));
}

TEST(TextCDGA, ErrorsCarryLineNumbers) {
    try {
        text::parse_cdga("generators\n x : 1\nd\n x -> x*x*y\n");
        FAIL();
    } catch (const JobError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
    EXPECT_THROW(text::parse_cdga("generators\n x : one\n"), JobError);
    EXPECT_THROW(text::parse_cdga("generators\n x : 1\nd\n x -> 1\n"), JobError);  // wrong degree
    EXPECT_THROW(text::parse_cdga("generators\n x : 1\n x : 1\n"), JobError);
    EXPECT_THROW(text::parse_cdga("x : 1\n"), JobError);
    EXPECT_THROW(text::parse_cdga("generators\n x : 1\nd\n y -> x\n"), JobError);
}

TEST(TextLie, BracketsAndPresets) {
    const LieAlgebra g = text::parse_lie("dim 3\n[1,2] = e3\n");
    EXPECT_EQ(classify_heisenberg_type(g), 1);
    const LieAlgebra f = text::parse_lie("filiform(5)");
    EXPECT_EQ(f.dimension(), 5u);
    EXPECT_FALSE(classify_heisenberg_type(f).has_value());
    EXPECT_EQ(text::parse_lie("heisenberg(2) + abelian(3)").dimension(), 8u);
    EXPECT_EQ(text::parse_lie("abelian(4)").dimension(), 4u);
    const LieAlgebra q = text::parse_lie("dim 2\n[1,2] = 1/2*e1 - e2\n");
    EXPECT_EQ(q.bracket(0, 1), (Vector{Scalar(1, 2), -1}));
}

TEST(TextLie, Errors) {
    EXPECT_THROW(text::parse_lie("quaternion(2)"), JobError);
    EXPECT_THROW(text::parse_lie("dim 3\n[1,4] = e1\n"), JobError);
    EXPECT_THROW(text::parse_lie("dim 3\n[2,1] = e1\n"), JobError);
    EXPECT_THROW(text::parse_lie("[1,2] = e3\n"), JobError);
    EXPECT_THROW(text::parse_lie("dim 3\n[1,2] = e1*e2\n"), JobError);
    EXPECT_FALSE(text::parse_lie_preset("filiform(1)").has_value());
    EXPECT_FALSE(text::parse_lie_preset("heisenberg(x)").has_value());
}

TEST(TextSubCDGA, ParsesAndValidates) {
    const CDGA a = chevalley_eilenberg(heisenberg_sum(1, 0));
    const auto lines = text::read_lines(std::string("basis[0] = [1]\nbasis[1] = [a3]\nbasis[2] = [a1*a2]\nbasis[3] = [a1*a2*a3]\n"));
    const SubCDGA s = text::parse_subcdga(a, lines);
    EXPECT_EQ(s.dimensions(), (std::vector<std::size_t>{1, 1, 1, 1}));
    EXPECT_EQ(text::format_subcdga(s), "basis[0] = [1]\nbasis[1] = [a3]\nbasis[2] = [a1*a2]\nbasis[3] = [a1*a2*a3]\n");
    EXPECT_THROW(text::parse_subcdga(a, text::read_lines(std::string("basis[0] = [1]\nbasis[1] = [a3]\n"))), JobError);
}

TEST(Job, ObjectsAndRunLine) {
    const Job job = parse_job(R"(
# comment
object lie H {
  heisenberg(1)
}
object automorphism phi on H order 4 {
  map a1 -> a2
  map a2 -> -a1   # inline comment
  map a3 -> a3
}
object subcdga S of H {
  basis[0] = [1]
  basis[1] = [a1]
}
object morphism incl from S to H {
  map a1 -> a1
  map a2 -> a2
  map a3 -> a3
}
run betti H
)");
    EXPECT_EQ(job.run, (std::vector<std::string>{"betti", "H"}));
    EXPECT_EQ(job.objects.size(), 4u);
    EXPECT_TRUE(job.as_cdga("H").has_value());
    EXPECT_TRUE(job.as_lie("abelian(2)").has_value());
    EXPECT_TRUE(std::holds_alternative<AutomorphismSpec>(*job.find("phi")));
}

TEST(Job, Errors) {
    auto line_of = [](const std::string& s) -> std::size_t {
        try {
            parse_job(s);
        } catch (const JobError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("object lie H {\n heisenberg(1)\n}\nobject lie H {\n abelian(1)\n}\n"), 4u);
    EXPECT_EQ(line_of("object lie H {\n heisenberg(1)\n"), 1u);
    EXPECT_EQ(line_of("object widget W {\n}\n"), 1u);
    EXPECT_EQ(line_of("object subcdga S of X {\n basis[0] = [1]\n}\n"), 1u);
    EXPECT_EQ(line_of("run betti H\nrun betti H\n"), 2u);
    EXPECT_EQ(line_of("betti H\n"), 1u);
    EXPECT_EQ(line_of("object lie H {\n heisenberg(1)\n}\nobject automorphism f on H order 2 {\n map a1 -> a2\n map a2 -> a1\n map a3 -> a3\n}\n"), 4u);
    EXPECT_EQ(line_of("object lie H {\n heisenberg(1)\n}\nobject morphism m from H to H {\n map a1 -> a1\n map a1 -> a2\n}\n"), 6u);
}
