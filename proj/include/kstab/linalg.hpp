/**
 * Hand-rolled exact linear algebra over the rationals.  Sizes here are tiny
 * (n <= 4 ambient, interpolation matrices up to ~8x8), so plain Gaussian
 * elimination with exact pivots is both certifiable and fast.
 */

#ifndef KSTAB_LINALG_HPP
#define KSTAB_LINALG_HPP

#include <optional>
#include <vector>

#include "kstab/rational.hpp"

namespace kstab {

/// Exact determinant by fraction-producing Gaussian elimination.
Rat det(const RatMat& m);

/// Exact rank.
int rank(const RatMat& m);

/// Solves A x = b for square nonsingular A; nullopt when singular.
std::optional<RatVec> solve(const RatMat& a, const RatVec& b);

/// Exact inverse; nullopt when singular.
std::optional<RatMat> inverse(const RatMat& a);

/// Basis of the rational kernel {x : A x = 0} as matrix columns.
RatMat kernel(const RatMat& a);

/// Basis of the integer lattice {z in Z^n : <a, z> = 0} for a primitive
/// integer vector a, as columns of an n x (n-1) integer matrix.  The basis
/// spans the full sublattice (covolume one in the induced normalisation).
RatMat integer_kernel_basis(const RatVec& a);

/// Extreme rays of the pointed cone {y : M y >= 0}, each primitive integer.
/// Requires rank(M) = dim (pointedness); returns rays sorted
/// lexicographically.  dim = M.cols().
std::vector<RatVec> extreme_rays(const RatMat& m);

}  // namespace kstab

#endif
