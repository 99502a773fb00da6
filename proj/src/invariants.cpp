#include "kstab/invariants.hpp"

namespace kstab {

std::vector<TorusVector> standard_basis(int n) {
    std::vector<TorusVector> basis;
    for (int i = 0; i < n; ++i) {
        RatVec e = RatVec::Zero(n);
        e(i) = 1;
        basis.push_back(e);
    }
    return basis;
}

EhrhartData ehrhart_from_integrals(const DelzantPolytope& p, const TorusVector& u,
                                   const TorusVector& v) {
    const int n = p.dim();
    EhrhartData e;
    e.a0 = integrate(p, Poly2::constant(n, 1));
    e.a1 = boundary_integrate(p, Poly2::constant(n, 1)) / 2;
    e.b0 = integrate(p, Poly2::linear(u));
    e.b1 = boundary_integrate(p, Poly2::linear(u)) / 2;
    e.c0 = integrate(p, Poly2::bilinear(u, u));
    e.d0 = integrate(p, Poly2::bilinear(u, v));
    return e;
}

Rat futaki(const DelzantPolytope& p, const TorusVector& u) {
    EhrhartData e = ehrhart_from_integrals(p, u, u);
    return 4 * (e.b0 * e.a1 - e.b1 * e.a0) / e.a0;
}

Rat inner_product(const DelzantPolytope& p, const TorusVector& u, const TorusVector& v) {
    Rat a0 = integrate(p, Poly2::constant(p.dim(), 1));
    Rat b0u = integrate(p, Poly2::linear(u));
    Rat b0v = integrate(p, Poly2::linear(v));
    Rat d0 = integrate(p, Poly2::bilinear(u, v));
    return (d0 * a0 - b0u * b0v) / (a0 * a0);
}

GramMatrix gram_matrix(const DelzantPolytope& p, const std::vector<TorusVector>& basis) {
    GramMatrix g;
    g.basis = basis;
    const int m = static_cast<int>(basis.size());
    g.entries = RatMat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            g.entries(i, j) = inner_product(p, basis[i], basis[j]);
            g.entries(j, i) = g.entries(i, j);
        }
    return g;
}

FutakiCharacter futaki_character(const DelzantPolytope& p, const std::vector<TorusVector>& basis) {
    FutakiCharacter f;
    f.basis = basis;
    f.values = RatVec(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) f.values(static_cast<int>(i)) = futaki(p, basis[i]);
    return f;
}

TorusVector extremal_field(const DelzantPolytope& p) {
    auto basis = standard_basis(p.dim());
    GramMatrix g = gram_matrix(p, basis);
    FutakiCharacter f = futaki_character(p, basis);
    auto chi = solve(g.entries, f.values);
    if (!chi) throw DomainError("SingularGram", "Gram matrix of the standard basis is singular");
    return *chi;
}

Rat relative_df(const DelzantPolytope& p, const TorusVector& u,
                const std::vector<TorusVector>& stab_basis) {
    // Exact Gram-Schmidt on the stabiliser basis.
    std::vector<TorusVector> ortho;
    for (const auto& v : stab_basis) {
        TorusVector w = v;
        for (const auto& o : ortho) w -= (inner_product(p, w, o) / inner_product(p, o, o)) * o;
        if (inner_product(p, w, w) == 0)
            throw DomainError("DependentBasis", "stabiliser basis is linearly dependent");
        ortho.push_back(w);
    }
    Rat df = futaki(p, u);
    for (const auto& o : ortho)
        df -= (inner_product(p, u, o) / inner_product(p, o, o)) * futaki(p, o);
    return df;
}

}  // namespace kstab
