/**
 * Exact eps-expansions of the six Ehrhart coefficients under the corner
 * chop of size t = eps^2 at a vertex, the induced expansion of the Futaki
 * invariant as a ratio of polynomials, the (A, B) coefficient pair of the
 * fixed-point functional, and eps-dependent Gram matrices with orthogonal
 * complements.
 *
 * The closed forms used here are pinned, coefficient by coefficient, by the
 * chopped-polytope oracle (verify_expansion_oracle): every expansion must
 * equal the Ehrhart fit of chop_corner(P, v, t) as a polynomial identity in
 * t = eps^2.  In particular the subleading coefficients are
 *   a1(eps) = a1 - eps^{2n-2} / (2 (n-2)!)       and
 *   b1(eps) = b1 + eps^{2n-2} H(p) / (2 (n-2)!) + eps^{2n} (n-2) DH(p) / (2 n!),
 * the unique exponents and scales that survive the oracle.
 */

#ifndef KSTAB_BLOWUP_HPP
#define KSTAB_BLOWUP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "kstab/counts.hpp"
#include "kstab/eps_poly.hpp"
#include "kstab/invariants.hpp"
#include "kstab/polytope.hpp"

namespace kstab {

/// The six expansions for the blowup at vertex v with directions u (and w
/// for the cross term; w defaults to u, making d0 the same as c0).
struct CountExpansions {
    int n = 0;
    EpsPoly a0, a1, b0, b1, c0, d0;
};

CountExpansions expand_counts(const DelzantPolytope& p, int vertex, const TorusVector& u,
                              const std::optional<TorusVector>& w = std::nullopt);

/// Checks all six expansions against ehrhart_fit(chop_corner(P, v, t)) at
/// the given chop sizes.  n+3 distinct sizes prove the identity as
/// polynomials in t; fewer sizes still give strong point checks.
/// Errors: OracleMismatch.
void verify_expansion_oracle(const DelzantPolytope& p, int vertex, const TorusVector& u,
                             const TorusVector& w, const std::vector<Rat>& chop_sizes);

/// F_eps(u) = 4 (b0(e) a1(e) - b1(e) a0(e)) / a0(e), exact.
EpsExpansion futaki_eps(const DelzantPolytope& p, int vertex, const TorusVector& u);

/// The vertex functional coefficients (A, B): for every u,
///   F_eps(u) = F(u) - 4 (A_eps H_u(p) + B_eps DH_u(p)),
/// with H_u the zero-average Hamiltonian.  A and B depend only on eps and on
/// (n, a0, a1); A is positive at leading order eps^{2n-2}/(2(n-2)!) and B is
/// of strictly higher order.
std::pair<EpsExpansion, EpsExpansion> ab_coefficients(const DelzantPolytope& p, int vertex);

/// Same pair from raw invariants, for synthetic branch analysis (e.g. the
/// n = 2, a1 = 0 branch which no actual polytope attains).
std::pair<EpsExpansion, EpsExpansion> ab_from_base(int n, const Rat& a0, const Rat& a1);

struct EpsGram {
    std::vector<TorusVector> basis;
    std::vector<std::vector<EpsExpansion>> entries;  // symmetric
};

/// Pairings <b_i, b_j>_eps = (d0_ij(e) a0(e) - b0_i(e) b0_j(e)) / a0(e)^2
/// with blowup data at the given vertex.
EpsGram eps_gram(const DelzantPolytope& p, int vertex, const std::vector<TorusVector>& basis);

/// Evaluates the Gram at rational eps and certifies positive definiteness
/// by leading principal minors.  Errors: NotPositiveDefinite.
RatMat eps_gram_at(const EpsGram& g, const Rat& eps);

/// Exact basis of the <.,.>_eps-orthogonal complement of span(stab) inside
/// span(g.basis), by Gram-Schmidt at the given eps; members are primitive
/// integer vectors, mutually orthogonal at eps.
/// Errors: NotPositiveDefinite, DependentBasis.
std::vector<TorusVector> perp_basis(const EpsGram& g, const std::vector<TorusVector>& stab,
                                    const Rat& eps);

}  // namespace kstab

#endif
