/**
 * Base-manifold invariants computed from exact polytope measures: the
 * Futaki character, the inner product of zero-average Hamiltonians, the
 * extremal vector field and the relative version of the invariant.
 *
 * Normalisation: F(u) = 4 (b0 a1 - b1 a0) / a0 with
 *   a0 = vol(P), a1 = (1/2) \int_{dP} 1, b0 = \int_P <u,x>,
 *   b1 = (1/2) \int_{dP} <u,x>,
 * and <u,v> = (d0 a0 - b0^u b0^v) / a0^2 with d0 = \int_P <u,x><v,x>.
 */

#ifndef KSTAB_INVARIANTS_HPP
#define KSTAB_INVARIANTS_HPP

#include <vector>

#include "kstab/counts.hpp"
#include "kstab/polytope.hpp"

namespace kstab {

struct GramMatrix {
    std::vector<TorusVector> basis;
    RatMat entries;
};

struct FutakiCharacter {
    std::vector<TorusVector> basis;
    RatVec values;
};

/// The six coefficients from exact polytope integrals (the fast path; equals
/// ehrhart_fit on the nose).
EhrhartData ehrhart_from_integrals(const DelzantPolytope& p, const TorusVector& u,
                                   const TorusVector& v);

Rat futaki(const DelzantPolytope& p, const TorusVector& u);

Rat inner_product(const DelzantPolytope& p, const TorusVector& u, const TorusVector& v);

GramMatrix gram_matrix(const DelzantPolytope& p, const std::vector<TorusVector>& basis);

FutakiCharacter futaki_character(const DelzantPolytope& p, const std::vector<TorusVector>& basis);

/// The Riesz representative chi with <chi, v> = F(v) for all v; exact solve
/// of the Gram system on the standard basis.  Errors: SingularGram.
TorusVector extremal_field(const DelzantPolytope& p);

/// F(u) minus the projection onto the span of stab_basis (orthogonalised
/// first).  Errors: DependentBasis.
Rat relative_df(const DelzantPolytope& p, const TorusVector& u,
                const std::vector<TorusVector>& stab_basis);

std::vector<TorusVector> standard_basis(int n);

}  // namespace kstab

#endif
