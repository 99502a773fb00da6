#include <doctest.h>

#include "corpus.hpp"
#include "kstab/blowup.hpp"

using namespace kstab;
using namespace kstab::testing;

TEST_CASE("frozen expansions at the origin corner of the 2-simplex") {
    auto p = simplex2();
    auto e = expand_counts(p, p.vertex_index(rv("0,0")), rv("1,0"));
    CHECK(e.a0 == EpsPoly(Rat(1, 2)) - EpsPoly::monomial(4, Rat(1, 2)));
    CHECK(e.b0 == EpsPoly(Rat(1, 6)) - EpsPoly::monomial(6, Rat(1, 6)));
    CHECK(e.c0 == EpsPoly(Rat(1, 12)) - EpsPoly::monomial(8, Rat(1, 12)));

    auto e2 = expand_counts(p, p.vertex_index(rv("1,0")), rv("1,0"));
    CHECK(e2.b0 == EpsPoly(Rat(1, 6)) - EpsPoly::monomial(4, Rat(1, 2)) + EpsPoly::monomial(6, Rat(1, 3)));
    CHECK(e2.b1 == EpsPoly(Rat(1, 2)) - EpsPoly::monomial(2, Rat(1, 2)));

    // Zero direction: only the volume coefficients move.
    auto e0 = expand_counts(p, 0, rv("0,0"));
    CHECK(e0.b0 == EpsPoly(Rat(0)));
    CHECK(e0.c0 == EpsPoly(Rat(0)));
}

TEST_CASE("the chop oracle pins every expansion on the corpus") {
    std::vector<Rat> ts{Rat(1, 3), Rat(1, 4), Rat(1, 5), Rat(1, 6), Rat(1, 7), Rat(1, 8)};
    std::vector<DelzantPolytope> corpus{simplex2(), unit_square(), simplex3()};
    for (const auto& p : corpus) {
        const int n = p.dim();
        std::vector<TorusVector> dirs;
        RatVec e1 = RatVec::Zero(n), e2 = RatVec::Zero(n), ones = RatVec::Zero(n);
        e1(0) = 1;
        e2(1) = 1;
        for (int i = 0; i < n; ++i) ones(i) = 1;
        dirs = {e1, e2, ones};
        // n+3 distinct chop sizes make the checks a polynomial identity in t.
        std::vector<Rat> sizes(ts.begin(), ts.begin() + (n + 3));
        for (std::size_t vi = 0; vi < p.vertices().size(); ++vi)
            for (std::size_t i = 0; i < dirs.size(); ++i)
                CHECK_NOTHROW(
                    verify_expansion_oracle(p, static_cast<int>(vi), dirs[i], dirs[(i + 1) % 3], sizes));
    }
}

TEST_CASE("expansions evaluate to the base invariants at eps = 0") {
    auto p = unit_square();
    auto e = expand_counts(p, 2, rv("1,1"), rv("1,0"));
    auto base = ehrhart_from_integrals(p, rv("1,1"), rv("1,0"));
    CHECK(e.a0.coeff(0) == base.a0);
    CHECK(e.a1.coeff(0) == base.a1);
    CHECK(e.b0.coeff(0) == base.b0);
    CHECK(e.b1.coeff(0) == base.b1);
    CHECK(e.c0.coeff(0) == base.c0);
    CHECK(e.d0.coeff(0) == base.d0);
}

TEST_CASE("cross expansions are bilinear and symmetric") {
    auto p = simplex2();
    TorusVector u = rv("1,2"), v = rv("3,-1");
    auto duv = expand_counts(p, 1, u, v).d0;
    auto dvu = expand_counts(p, 1, v, u).d0;
    CHECK(duv == dvu);
    auto d2uv = expand_counts(p, 1, RatVec(Rat(2) * u), v).d0;
    CHECK(d2uv == duv * Rat(2));
    auto sum = expand_counts(p, 1, RatVec(u + v), v).d0;
    CHECK(sum == duv + expand_counts(p, 1, v, v).d0);
}

TEST_CASE("futaki_eps base case and exact rational values") {
    auto p = simplex2();
    int v00 = p.vertex_index(rv("0,0"));
    auto F = futaki_eps(p, v00, rv("1,1"));
    CHECK(F.at_zero() == futaki(p, rv("1,1")));
    // The origin is the minimum of <(1,1), .> over the simplex.
    CHECK(F(Rat(1, 2)) == Rat(-3, 20));
    // Cross-check against the chopped polytope at t = 1/4.
    auto fit = ehrhart_fit(chop_corner(p, v00, Rat(1, 4)), rv("1,1"), rv("1,1"));
    CHECK(F(Rat(1, 2)) == 4 * (fit.b0 * fit.a1 - fit.b1 * fit.a0) / fit.a0);
}

TEST_CASE("futaki_eps vanishes identically in the fully symmetric situation") {
    // Square at the origin corner with u = (1,-1): b0 = b1 = 0 by the mirror
    // symmetry and H(p) = DH(p) = 0.
    auto p = unit_square();
    int v00 = p.vertex_index(rv("0,0"));
    auto fp = fixed_point_data(p.vertices()[v00], rv("1,-1"));
    REQUIRE(fp.h == 0);
    REQUIRE(fp.lap_h == 0);
    REQUIRE(integrate(p, Poly2::linear(rv("1,-1"))) == 0);
    REQUIRE(boundary_integrate(p, Poly2::linear(rv("1,-1"))) == 0);
    CHECK(futaki_eps(p, v00, rv("1,-1")).identically_zero());
}

TEST_CASE("A and B coefficient structure") {
    // n = 3: leading term of A is eps^4 / 2.
    auto p3 = simplex3();
    auto [a3, b3] = ab_coefficients(p3, 0);
    CHECK(a3.order() == 4);
    auto a3s = a3.series(4);
    CHECK(a3s[4] == Rat(1, 2));
    CHECK(b3.order() > a3.order());

    // n = 2 on the simplex: A starts at eps^2 / 2, B at order 6.
    auto p2 = simplex2();
    auto [a2, b2] = ab_coefficients(p2, 0);
    CHECK(a2.order() == 2);
    CHECK(a2.series(2)[2] == Rat(1, 2));
    CHECK(b2.order() == 6);
    CHECK(b2.order() > a2.order());

    // Synthetic n = 2, a1 = 0 branch: B's leading term carries 1/(12 a0).
    Rat a0(1, 2);
    auto [az, bz] = ab_from_base(2, a0, Rat(0));
    CHECK(bz.order() == 8);
    CHECK(bz.series(8)[8] == 1 / (12 * a0));
}

TEST_CASE("formal-symbol consistency of the (A, B) decomposition") {
    for (const auto& p : {simplex2(), unit_square(), simplex3()}) {
        Rat a0 = integrate(p, Poly2::constant(p.dim(), 1));
        for (std::size_t vi = 0; vi < p.vertices().size(); ++vi) {
            auto [a, b] = ab_coefficients(p, static_cast<int>(vi));
            RatVec u(p.dim());
            for (int i = 0; i < p.dim(); ++i) u(i) = Rat(2 * i + 1);
            auto fp = fixed_point_data(p.vertices()[vi], u);
            Rat h0 = fp.h + integrate(p, Poly2::linear(u)) / a0;  // zero-average value
            EpsExpansion reconstructed =
                EpsExpansion(EpsPoly(futaki(p, u))) - (a * h0 + b * fp.lap_h) * Rat(4);
            CHECK(futaki_eps(p, static_cast<int>(vi), u).same_function(reconstructed));
        }
    }
}

TEST_CASE("eps-Gram matrices") {
    auto p = simplex2();
    int v00 = p.vertex_index(rv("0,0"));
    auto g = eps_gram(p, v00, standard_basis(2));
    // Symmetry and the base case.
    CHECK(g.entries[0][1].same_function(g.entries[1][0]));
    RatMat g0 = eps_gram_at(g, Rat(0));
    CHECK(g0(0, 0) == Rat(1, 18));
    CHECK(g0(0, 1) == Rat(-1, 36));
    // Positive definite on a small-eps grid.
    for (const auto& eps : {Rat(1, 8), Rat(1, 16), Rat(1, 32)}) CHECK_NOTHROW(eps_gram_at(g, eps));
    // Breaks down once the chop exhausts the volume (a0(eps) <= 0).
    CHECK_THROWS_WITH_AS(eps_gram_at(g, Rat(1)), doctest::Contains("NotPositiveDefinite"),
                         DomainError);
}

TEST_CASE("perp bases") {
    auto p = simplex2();
    int v00 = p.vertex_index(rv("0,0"));
    auto g = eps_gram(p, v00, standard_basis(2));
    auto perp0 = perp_basis(g, {rv("0,1")}, Rat(0));
    REQUIRE(perp0.size() == 1);
    CHECK(perp0[0] == rv("2,1"));
    // Orthogonality at a positive eps, exactly.
    Rat eps(1, 10);
    auto perp = perp_basis(g, {rv("0,1")}, eps);
    RatMat gm = eps_gram_at(g, eps);
    CHECK(perp[0].dot(gm * rv("0,1")) == 0);
    // Full stabiliser leaves nothing.
    CHECK(perp_basis(g, standard_basis(2), eps).empty());
    // Empty stabiliser returns an orthogonalised full basis.
    auto full = perp_basis(g, {}, eps);
    REQUIRE(full.size() == 2);
    CHECK(full[0].dot(gm * full[1]) == 0);
}
