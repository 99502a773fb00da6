/**
 * The brute-force oracle layer: weighted lattice-point enumeration in
 * polytope dilates, exact Ehrhart-coefficient extraction by interpolation,
 * and jet-space weight sums at fixed points.  Everything here is exact and
 * pins the sign conventions used by the rest of the toolkit.
 *
 * Weight convention: the lattice point m carries weight <u, m>; a jet
 * monomial with exponent vector s in the edge coordinates of a vertex
 * carries weight -sum_i s_i <u, e_i>.  Consequently, for the fixed point p
 * of a vertex, H(p) = -<u, p> and Delta H(p) = -sum_i <u, e_i>.
 */

#ifndef KSTAB_COUNTS_HPP
#define KSTAB_COUNTS_HPP

#include <optional>
#include <vector>

#include "kstab/polytope.hpp"
#include "kstab/rational.hpp"

namespace kstab {

struct WeightSums {
    long k = 0;
    long dim = 0;       // number of lattice points of kP
    Rat wt_u = 0;       // sum of <u, m>
    Rat sq_u = 0;       // sum of <u, m>^2
    Rat cross_uv = 0;   // sum of <u, m><v, m> (zero when v is absent)
};

/// The six leading coefficients of the dimension/weight polynomials:
///   a(k) = a0 k^n + a1 k^{n-1} + ...
///   b(k) = b0 k^{n+1} + b1 k^n + ...
///   c(k) = c0 k^{n+2} + ...,  cross(k) = d0 k^{n+2} + ...
struct EhrhartData {
    Rat a0, a1, b0, b1, c0, d0;
};

struct JetWeights {
    long l = 0;
    long dim = 0;
    Rat wt = 0;
    Rat sq = 0;
};

/// Weight data of the torus action at a vertex fixed point.
struct FixedPointData {
    Rat h;        // H(p)      = -<u, p>
    Rat lap_h;    // Delta H(p) = -sum_i <u, e_i>
    Rat hess_uu;  // sum_i <u, e_i>^2
};

/// All integer points of the dilate kP, sorted lexicographically.
/// Errors: NonIntegralDilate when k does not clear the offset denominators.
std::vector<RatVec> lattice_points(const DelzantPolytope& p, long k);

WeightSums weight_sums(const DelzantPolytope& p, long k, const TorusVector& u,
                       const std::optional<TorusVector>& v = std::nullopt);

/// Exact coefficients by polynomial interpolation over k in d*{1..n+4},
/// cross-checked on the shifted window d*{2..n+5}.
/// Errors: FitInconsistent when the two windows disagree.
EhrhartData ehrhart_fit(const DelzantPolytope& p, const TorusVector& u,
                        const std::optional<TorusVector>& v = std::nullopt);

/// Weight data of the space of (l-1)-jets at the vertex fixed point:
/// monomials s with |s| <= l-1 in edge coordinates, each of weight
/// -sum_i s_i <u, e_i>.
JetWeights jet_weights(const VertexData& vd, const TorusVector& u, long l);

FixedPointData fixed_point_data(const VertexData& vd, const TorusVector& u);

/// Bilinear Hessian pairing sum_i <u, e_i><v, e_i>.
Rat hessian_pairing(const VertexData& vd, const TorusVector& u, const TorusVector& v);

/// Exact polynomial interpolation: fits a degree <= deg polynomial through
/// (x_i, y_i) for i <= deg and verifies it on the remaining samples.
/// Returns coefficients c[j] of x^j.  Throws FitInconsistent on mismatch.
std::vector<Rat> fit_polynomial(const std::vector<Rat>& xs, const std::vector<Rat>& ys, int deg);

}  // namespace kstab

#endif
