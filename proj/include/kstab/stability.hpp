/**
 * Decision procedures for relative stability of a blown-up point: the
 * specialisation of a point under torus flows, the vertex-functional
 * positivity test over the eps-orthogonal complement via exact extreme-ray
 * enumeration on normal cones, the eps-relative version of the invariant,
 * and a grid search for stable points.
 *
 * Conventions: the specialisation q_u minimises <u, .> over the point's
 * stratum; Hamiltonians are zero-average normalised,
 * H_u(x) = -(<u, x> - b0_u / a0).  The functional tested on each normal
 * cone is  u -> A_eps H_u(q) + B_eps DH_u(q).
 */

#ifndef KSTAB_STABILITY_HPP
#define KSTAB_STABILITY_HPP

#include <optional>
#include <vector>

#include "kstab/blowup.hpp"
#include "kstab/polytope.hpp"

namespace kstab {

/// The open stratum containing the point to blow up; the generic case is
/// the whole polytope.
struct PointSpec {
    Face face;
};

enum class Status { Stable, Unstable, Borderline };

std::string status_name(Status s);

/// One tested ray of one normal cone.
struct RayCertificate {
    TorusVector direction;  // primitive integer u
    RatVec vertex;          // the specialisation vertex q of the cone
    Rat value;              // A_eps H_u(q) + B_eps DH_u(q)
};

struct StabilityVerdict {
    Status status = Status::Stable;
    bool vacuous = false;                  // no directions to test
    std::optional<RayCertificate> witness; // minimising ray (failing one when not Stable)
    Rat certificate = 0;                   // minimum over all tested rays (when not vacuous)
    Rat eps = 0;
    std::vector<RayCertificate> rays;      // full table, deterministic order
};

/// Zero-average Hamiltonian of u evaluated at x.
Rat hamiltonian_at(const DelzantPolytope& p, const TorusVector& u, const RatVec& x);

/// -sum_i <u, e_i> over the edge generators at the vertex.
Rat laplacian_at(const DelzantPolytope& p, const TorusVector& u, int vertex);

/// The face of ps.face on which <u, .> is minimised (equivalently H_u is
/// maximised); a vertex for generic u.  Errors: ZeroVector.
Face specialization(const DelzantPolytope& p, const PointSpec& ps, const TorusVector& u);

/// Stabiliser basis of the stratum: the inward normals of its active facets.
std::vector<TorusVector> stabilizer_basis(const DelzantPolytope& p, const PointSpec& ps);

/// Condition-(iii) test at level eps: for every vertex q of ps.face, the
/// functional u -> A H_u(q) + B DH_u(q) must be positive on the nonzero
/// part of (normal cone of q in ps.face) intersected with the eps-orthogonal
/// complement of the stabiliser, certified on extreme rays.  The Gram used
/// for each cone carries the blowup data of that cone's own vertex.
/// Errors: EpsTooLarge, DegenerateCone.
StabilityVerdict check_point_stability(const DelzantPolytope& p, const PointSpec& ps, const Rat& eps,
                                       const std::optional<std::pair<Rat, Rat>>& ab_override =
                                           std::nullopt);

/// DF_{T,eps}(u) = F_eps(u) - sum_j (<u,v_j>_eps / <v_j,v_j>_eps) F_eps(v_j)
/// over the eps-orthogonalised stabiliser basis, all data at the given
/// vertex.  Errors: EpsTooLarge, DependentBasis.
Rat relative_df_eps(const DelzantPolytope& p, int vertex, const TorusVector& u,
                    const std::vector<TorusVector>& stab_basis, const Rat& eps);

struct FaceGridReport {
    Face face;
    std::vector<StabilityVerdict> verdicts;  // one per grid eps, in grid order
    Status combined = Status::Stable;
    bool monotonicity_violation = false;     // Stable at some eps, not at a smaller one
};

struct FindPointResult {
    std::optional<PointSpec> found;          // first face Stable across the grid
    std::vector<FaceGridReport> candidates;  // all faces, decreasing dimension
};

/// Runs check_point_stability on every face over the eps grid, faces in
/// decreasing dimension (generic point first).  A Stable verdict at some eps
/// followed by a non-Stable verdict at a smaller eps downgrades the combined
/// status to Borderline.
FindPointResult find_stable_point(const DelzantPolytope& p, const std::vector<Rat>& grid);

}  // namespace kstab

#endif
