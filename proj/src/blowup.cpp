#include "kstab/blowup.hpp"

namespace kstab {

CountExpansions expand_counts(const DelzantPolytope& p, int vertex, const TorusVector& u,
                              const std::optional<TorusVector>& w_opt) {
    const int n = p.dim();
    if (n < 2) throw std::invalid_argument("expand_counts: dimension must be at least 2");
    if (vertex < 0 || vertex >= static_cast<int>(p.vertices().size()))
        throw DomainError("NotAVertex", "vertex index " + std::to_string(vertex) + " out of range");
    const VertexData& vd = p.vertices()[vertex];
    const TorusVector w = w_opt.value_or(u);

    EhrhartData base = ehrhart_from_integrals(p, u, w);
    FixedPointData fu = fixed_point_data(vd, u);
    FixedPointData fw = fixed_point_data(vd, w);
    Rat hess_uw = hessian_pairing(vd, u, w);

    const Rat nf = factorial(n);
    CountExpansions e;
    e.n = n;
    e.a0 = EpsPoly(base.a0) - EpsPoly::monomial(2 * n, 1 / nf);
    e.a1 = EpsPoly(base.a1) - EpsPoly::monomial(2 * n - 2, 1 / (2 * factorial(n - 2)));
    e.b0 = EpsPoly(base.b0) + EpsPoly::monomial(2 * n, fu.h / nf) +
           EpsPoly::monomial(2 * n + 2, fu.lap_h / factorial(n + 1));
    e.b1 = EpsPoly(base.b1) + EpsPoly::monomial(2 * n - 2, fu.h / (2 * factorial(n - 2))) +
           EpsPoly::monomial(2 * n, Rat(n - 2) * fu.lap_h / (2 * nf));
    e.c0 = EpsPoly(base.c0) - EpsPoly::monomial(2 * n, fu.h * fu.h / nf) -
           EpsPoly::monomial(2 * n + 2, 2 * fu.h * fu.lap_h / factorial(n + 1)) -
           EpsPoly::monomial(2 * n + 4, (fu.hess_uu + fu.lap_h * fu.lap_h) / factorial(n + 2));
    e.d0 = EpsPoly(base.d0) - EpsPoly::monomial(2 * n, fu.h * fw.h / nf) -
           EpsPoly::monomial(2 * n + 2, (fu.h * fw.lap_h + fw.h * fu.lap_h) / factorial(n + 1)) -
           EpsPoly::monomial(2 * n + 4, (hess_uw + fu.lap_h * fw.lap_h) / factorial(n + 2));
    return e;
}

namespace {

// Evaluates an even eps-polynomial at eps^2 = t.
Rat eval_even(const EpsPoly& p, const Rat& t) {
    Rat v = 0;
    for (const auto& [k, c] : p.coefficients()) {
        if (k % 2 != 0) throw std::logic_error("odd exponent in a chop expansion");
        Rat tp = 1;
        for (int i = 0; i < k / 2; ++i) tp *= t;
        v += c * tp;
    }
    return v;
}

}  // namespace

void verify_expansion_oracle(const DelzantPolytope& p, int vertex, const TorusVector& u,
                             const TorusVector& w, const std::vector<Rat>& chop_sizes) {
    CountExpansions e = expand_counts(p, vertex, u, w);
    for (const Rat& t : chop_sizes) {
        DelzantPolytope chopped = chop_corner(p, vertex, t);
        EhrhartData fit_u = ehrhart_fit(chopped, u, w);
        auto check = [&](const char* name, const EpsPoly& poly, const Rat& fitted) {
            Rat predicted = eval_even(poly, t);
            if (predicted != fitted)
                throw DomainError("OracleMismatch",
                                  std::string(name) + "(eps) at t = " + format_rational(t) +
                                      ": closed form gives " + format_rational(predicted) +
                                      " but the chopped-polytope fit gives " + format_rational(fitted));
        };
        check("a0", e.a0, fit_u.a0);
        check("a1", e.a1, fit_u.a1);
        check("b0", e.b0, fit_u.b0);
        check("b1", e.b1, fit_u.b1);
        check("c0", e.c0, fit_u.c0);
        check("d0", e.d0, fit_u.d0);
    }
}

EpsExpansion futaki_eps(const DelzantPolytope& p, int vertex, const TorusVector& u) {
    CountExpansions e = expand_counts(p, vertex, u);
    EpsPoly num = (e.b0 * e.a1 - e.b1 * e.a0) * Rat(4);
    return EpsExpansion(num, e.a0);
}

std::pair<EpsExpansion, EpsExpansion> ab_from_base(int n, const Rat& a0, const Rat& a1) {
    if (n < 2) throw std::invalid_argument("ab_from_base: dimension must be at least 2");
    EpsPoly a0e = EpsPoly(a0) - EpsPoly::monomial(2 * n, 1 / factorial(n));
    EpsPoly a1e = EpsPoly(a1) - EpsPoly::monomial(2 * n - 2, 1 / (2 * factorial(n - 2)));
    // Coefficients of H and DH inside b0(e), b1(e).
    EpsPoly P = EpsPoly::monomial(2 * n, 1 / factorial(n));
    EpsPoly Q = EpsPoly::monomial(2 * n + 2, 1 / factorial(n + 1));
    EpsPoly R = EpsPoly::monomial(2 * n - 2, 1 / (2 * factorial(n - 2)));
    EpsPoly S = EpsPoly::monomial(2 * n, Rat(n - 2) / (2 * factorial(n)));
    EpsExpansion a(R * a0e - P * a1e, a0e);
    EpsExpansion b(S * a0e - Q * a1e, a0e);
    return {a, b};
}

std::pair<EpsExpansion, EpsExpansion> ab_coefficients(const DelzantPolytope& p, int vertex) {
    if (vertex < 0 || vertex >= static_cast<int>(p.vertices().size()))
        throw DomainError("NotAVertex", "vertex index " + std::to_string(vertex) + " out of range");
    const int n = p.dim();
    Rat a0 = integrate(p, Poly2::constant(n, 1));
    Rat a1 = boundary_integrate(p, Poly2::constant(n, 1)) / 2;
    return ab_from_base(n, a0, a1);
}

EpsGram eps_gram(const DelzantPolytope& p, int vertex, const std::vector<TorusVector>& basis) {
    EpsGram g;
    g.basis = basis;
    const int m = static_cast<int>(basis.size());
    g.entries.assign(m, std::vector<EpsExpansion>(m));
    // a0(e) and the per-direction b0(e) are shared across entries.
    CountExpansions base = expand_counts(p, vertex, basis.empty() ? TorusVector(RatVec::Zero(p.dim())) : basis[0]);
    EpsPoly a0e = base.a0;
    std::vector<EpsPoly> b0e(m);
    for (int i = 0; i < m; ++i) b0e[i] = expand_counts(p, vertex, basis[i]).b0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            EpsPoly d0e = expand_counts(p, vertex, basis[i], basis[j]).d0;
            EpsExpansion entry(d0e * a0e - b0e[i] * b0e[j], a0e * a0e);
            g.entries[i][j] = entry;
            g.entries[j][i] = entry;
        }
    return g;
}

RatMat eps_gram_at(const EpsGram& g, const Rat& eps) {
    const int m = static_cast<int>(g.basis.size());
    RatMat mat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) mat(i, j) = g.entries[i][j](eps);
    for (int k = 1; k <= m; ++k) {
        RatMat minor = mat.topLeftCorner(k, k);
        if (det(minor) <= 0)
            throw DomainError("NotPositiveDefinite",
                              "Gram matrix at eps = " + format_rational(eps) +
                                  " has a nonpositive leading principal minor (order " +
                                  std::to_string(k) + ")");
    }
    return mat;
}

std::vector<TorusVector> perp_basis(const EpsGram& g, const std::vector<TorusVector>& stab,
                                    const Rat& eps) {
    RatMat gram = eps_gram_at(g, eps);
    auto pair = [&](const RatVec& x, const RatVec& y) { return Rat(x.dot(gram * y)); };
    // Coordinates here are with respect to g.basis, which must span t.
    const int m = static_cast<int>(g.basis.size());
    if (g.basis.empty() || m != g.basis[0].size())
        throw std::invalid_argument("perp_basis: the Gram basis must span the algebra");
    RatMat basis_mat(g.basis[0].size(), m);
    for (int i = 0; i < m; ++i) basis_mat.col(i) = g.basis[i];
    auto coords_of = [&](const TorusVector& v) {
        auto c = solve(basis_mat, v);
        if (!c) throw DomainError("DependentBasis", "the Gram basis does not span the algebra");
        return *c;
    };

    std::vector<RatVec> ortho_stab;
    for (const auto& s : stab) {
        RatVec c = coords_of(s);
        for (const auto& o : ortho_stab) c -= (pair(c, o) / pair(o, o)) * o;
        if (pair(c, c) == 0)
            throw DomainError("DependentBasis", "stabiliser basis is linearly dependent");
        ortho_stab.push_back(c);
    }

    std::vector<TorusVector> out;
    std::vector<RatVec> ortho_out;
    for (int i = 0; i < m; ++i) {
        RatVec c = RatVec::Zero(m);
        c(i) = 1;
        for (const auto& o : ortho_stab) c -= (pair(c, o) / pair(o, o)) * o;
        for (const auto& o : ortho_out) c -= (pair(c, o) / pair(o, o)) * o;
        if (pair(c, c) == 0) continue;
        ortho_out.push_back(c);
        out.push_back(primitivize(basis_mat * c));
    }
    if (out.size() + stab.size() != static_cast<std::size_t>(m))
        throw DomainError("DependentBasis", "orthogonal complement has unexpected dimension");
    return out;
}

}  // namespace kstab
