#include <doctest.h>

#include <sstream>

#include "corpus.hpp"
#include "kstab/polytope.hpp"

using namespace kstab;
using namespace kstab::testing;

namespace {

Rat volume(const DelzantPolytope& p) { return integrate(p, Poly2::constant(p.dim(), 1)); }

}  // namespace

TEST_CASE("validation accepts the corpus") {
    CHECK(simplex2().vertices().size() == 3);
    CHECK(unit_square().vertices().size() == 4);
    CHECK(simplex3().vertices().size() == 4);
    auto p = simplex2();
    CHECK(p.vertices()[0].coords == rv("0,0"));
    CHECK(p.vertices()[1].coords == rv("0,1"));
    CHECK(p.vertices()[2].coords == rv("1,0"));
}

TEST_CASE("validation rejections name the defect") {
    // Cone {x >= 0, y >= 0} is unbounded.
    CHECK_THROWS_WITH_AS(validate_delzant(2, {{rv("1,0"), Rat(0)}, {rv("0,1"), Rat(0)}}),
                         doctest::Contains("Unbounded"), DomainError);
    // Even with three facets a recession direction remains.
    CHECK_THROWS_WITH_AS(
        validate_delzant(2, {{rv("1,0"), Rat(0)}, {rv("0,1"), Rat(0)}, {rv("1,1"), Rat(0)}}),
        doctest::Contains("Unbounded"), DomainError);
    CHECK_THROWS_WITH_AS(
        validate_delzant(2, {{rv("2,0"), Rat(0)}, {rv("0,1"), Rat(0)}, {rv("-1,-1"), Rat(-1)}}),
        doctest::Contains("NonPrimitiveNormal"), DomainError);
    // Square plus a diagonal facet through a corner: non-simple vertex.
    CHECK_THROWS_WITH_AS(validate_delzant(2, {{rv("1,0"), Rat(0)},
                                              {rv("0,1"), Rat(0)},
                                              {rv("-1,0"), Rat(-1)},
                                              {rv("0,-1"), Rat(-1)},
                                              {rv("1,1"), Rat(0)}}),
                         doctest::Contains("NonSimpleVertex"), DomainError);
    // Triangle with a non-unimodular corner (weighted projective plane).
    CHECK_THROWS_WITH_AS(
        validate_delzant(2, {{rv("1,0"), Rat(0)}, {rv("0,1"), Rat(0)}, {rv("-1,-2"), Rat(-2)}}),
        doctest::Contains("NonUnimodularVertex"), DomainError);
    // Empty intersection.
    CHECK_THROWS_WITH_AS(
        validate_delzant(2, {{rv("1,0"), Rat(1)}, {rv("0,1"), Rat(0)}, {rv("-1,-1"), Rat(-1)}}),
        doctest::Contains("NotFullDimensional"), DomainError);
}

TEST_CASE("chop of the 2-simplex at the origin") {
    auto p = simplex2();
    auto c = chop_corner(p, p.vertex_index(rv("0,0")), Rat(1, 3));
    CHECK(c.vertices().size() == 4);
    CHECK(volume(c) == Rat(4, 9));  // 1/2 - (1/3)^2/2
    CHECK_NOTHROW(c.vertex_index(rv("1/3,0")));
    CHECK_NOTHROW(c.vertex_index(rv("0,1/3")));
    CHECK_NOTHROW(c.vertex_index(rv("1,0")));
    CHECK_NOTHROW(c.vertex_index(rv("0,1")));
}

TEST_CASE("chop rejections") {
    auto p = simplex2();
    CHECK_THROWS_WITH_AS(chop_corner(p, p.vertex_index(rv("0,0")), Rat(2)),
                         doctest::Contains("ChopTooLarge"), DomainError);
    CHECK_THROWS_WITH_AS(chop_corner(p, p.vertex_index(rv("0,0")), Rat(1)),
                         doctest::Contains("ChopTooLarge"), DomainError);
    CHECK_THROWS_AS(chop_corner(p, 17, Rat(1, 3)), DomainError);
}

TEST_CASE("small chops converge to the original vertices") {
    auto p = simplex2();
    Rat t(1, 1000);
    auto c = chop_corner(p, p.vertex_index(rv("0,0")), t);
    CHECK_NOTHROW(c.vertex_index(RatVec(rv("1,0"))));
    CHECK_NOTHROW(c.vertex_index(RatVec(rv("0,1"))));
    CHECK_NOTHROW(c.vertex_index(RatVec(t * rv("1,0"))));
    CHECK_NOTHROW(c.vertex_index(RatVec(t * rv("0,1"))));
}

TEST_CASE("exact moments over the 2-simplex") {
    auto p = simplex2();
    CHECK(volume(p) == Rat(1, 2));
    CHECK(integrate(p, Poly2::linear(rv("1,0"))) == Rat(1, 6));
    CHECK(integrate(p, Poly2::bilinear(rv("1,0"), rv("0,1"))) == Rat(1, 24));
    CHECK(integrate(p, Poly2::bilinear(rv("1,0"), rv("1,0"))) == Rat(1, 12));
    CHECK_THROWS_WITH_AS(Poly2::monomial({2, 1}, Rat(1)), doctest::Contains("DegreeTooHigh"),
                         DomainError);
}

TEST_CASE("lattice-normalised boundary measure") {
    CHECK(boundary_integrate(simplex2(), Poly2::constant(2, 1)) == 3);
    CHECK(boundary_integrate(unit_square(), Poly2::constant(2, 1)) == 4);
    CHECK(boundary_integrate(simplex2(), Poly2::linear(rv("1,0"))) == 1);
}

TEST_CASE("volume additivity under chop, exact") {
    std::mt19937 rng(20240817);
    for (const auto& p : {simplex2(), unit_square(), simplex3()}) {
        for (int vi = 0; vi < static_cast<int>(p.vertices().size()); ++vi) {
            std::uniform_int_distribution<int> den(3, 9);
            Rat t(1, den(rng));
            auto c = chop_corner(p, vi, t);
            Rat tn = 1;
            for (int i = 0; i < p.dim(); ++i) tn *= t;
            CHECK(volume(p) == volume(c) + tn / factorial(p.dim()));
        }
    }
}

TEST_CASE("chop output is Delzant and chops compose") {
    auto c = chopped_simplex(Rat(1, 3));
    // Re-validation from raw facets succeeds.
    CHECK_NOTHROW(validate_delzant(c.dim(), c.facets()));
    auto cc = chop_corner(c, c.vertex_index(rv("1,0")), Rat(1, 5));
    CHECK(volume(cc) == Rat(4, 9) - Rat(1, 50));
}

TEST_CASE("GL(n,Z) equivariance of the exact measures") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        auto p = trial % 2 ? unit_square() : simplex3();
        const int n = p.dim();
        RatMat a = random_unimodular(n, rng);
        RatVec shift(n);
        for (int i = 0; i < n; ++i) shift(i) = Rat(trial - 2, 3);
        auto q = transform(p, a, shift);
        // The integrand transported to the new coordinates.
        RatMat ainv = *inverse(a);
        RatVec u(n);
        for (int i = 0; i < n; ++i) u(i) = Rat(i + 1);
        Poly2 integrand = Poly2::bilinear(u, u) + Poly2::linear(u) * Rat(2);
        Poly2 moved = integrand.compose_affine(ainv, RatVec(-(ainv * shift)));
        CHECK(integrate(q, moved) == integrate(p, integrand));
        Poly2 affine = Poly2::linear(u) + Poly2::constant(n, Rat(3, 2));
        Poly2 affine_moved = affine.compose_affine(ainv, RatVec(-(ainv * shift)));
        CHECK(boundary_integrate(q, affine_moved) == boundary_integrate(p, affine));
    }
}

TEST_CASE("triangulation independence") {
    for (const auto& p : {simplex2(), unit_square(), simplex3(), chopped_simplex(Rat(1, 4))}) {
        RatVec u(p.dim());
        for (int i = 0; i < p.dim(); ++i) u(i) = Rat(2 * i - 1);
        Poly2 q = Poly2::bilinear(u, u) + Poly2::linear(u) + Poly2::constant(p.dim(), Rat(1, 7));
        CHECK(integrate(p, q, false) == integrate(p, q, true));
    }
}

TEST_CASE("polytope text format round-trips") {
    auto p = chopped_simplex(Rat(1, 3));
    std::istringstream in(format_polytope(p));
    auto q = parse_polytope(in);
    REQUIRE(q.facets().size() == p.facets().size());
    for (std::size_t i = 0; i < p.facets().size(); ++i) {
        CHECK(q.facets()[i].normal == p.facets()[i].normal);
        CHECK(q.facets()[i].offset == p.facets()[i].offset);
    }
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream bad("dim 2\nfacet 1 0 0\nfacet 0 1 zero\n");
    try {
        parse_polytope(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream short_line("dim 2\nfacet 1 0\n");
    CHECK_THROWS_AS(parse_polytope(short_line), ParseError);
    std::istringstream no_dim("facet 1 0 0\n");
    CHECK_THROWS_AS(parse_polytope(no_dim), ParseError);
}
