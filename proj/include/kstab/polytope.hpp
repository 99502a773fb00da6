/**
 * Exact representation, validation and measure theory of Delzant polytopes,
 * including the corner-chop realisation of blowing up a torus-fixed point.
 *
 * A polytope is stored by facet inequalities <normal, x> >= offset with
 * primitive integer inward normals and rational offsets.  Validation
 * certifies boundedness, full dimension and the Delzant (smoothness)
 * condition at every vertex, and caches the full face lattice.
 */

#ifndef KSTAB_POLYTOPE_HPP
#define KSTAB_POLYTOPE_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "kstab/error.hpp"
#include "kstab/linalg.hpp"
#include "kstab/poly2.hpp"
#include "kstab/rational.hpp"

namespace kstab {

struct Facet {
    RatVec normal;  // primitive integer, inward
    Rat offset;     // <normal, x> >= offset
};

/// A vertex together with the primitive integer directions of the edges
/// leaving it.  For a Delzant vertex the edge matrix is unimodular.
struct VertexData {
    RatVec coords;
    std::vector<int> active;          // facet indices active at the vertex (size n)
    std::vector<RatVec> edge_generators;  // primitive integer, |det| = 1
};

/// A face of the polytope, identified by the set of facets containing it.
struct Face {
    std::set<int> active;
    int dimension = 0;
    std::vector<int> vertex_indices;  // indices into the vertex cache
};

class DelzantPolytope {
public:
    int dim() const { return dim_; }
    const std::vector<Facet>& facets() const { return facets_; }
    const std::vector<VertexData>& vertices() const { return vertices_; }

    /// All faces, the whole polytope (empty active set) included, sorted by
    /// decreasing dimension then by active set.
    const std::vector<Face>& faces() const { return faces_; }

    const Face& whole_polytope_face() const { return faces_.front(); }

    /// Index into vertices() of the vertex with the given coordinates.
    /// Throws NotAVertex.
    int vertex_index(const RatVec& coords) const;

    /// The face with the given active set; throws DomainError when absent.
    const Face& face_by_active_set(const std::set<int>& active) const;

    friend DelzantPolytope validate_delzant(int dim, const std::vector<Facet>& facets);

private:
    int dim_ = 0;
    std::vector<Facet> facets_;
    std::vector<VertexData> vertices_;
    std::vector<Face> faces_;
};

/// Validates raw facet data and builds the vertex/face caches.
/// Errors: Unbounded, NotFullDimensional, NonPrimitiveNormal,
/// NonSimpleVertex, NonUnimodularVertex.
DelzantPolytope validate_delzant(int dim, const std::vector<Facet>& facets);

/// Truncates the polytope at a vertex by a simplex of lattice size t; the
/// toric model of blowing up the corresponding fixed point with exceptional
/// class weight t = eps^2.  Errors: NotAVertex, ChopTooLarge.
DelzantPolytope chop_corner(const DelzantPolytope& p, int vertex, const Rat& t);

/// Exact integral of a polynomial of total degree <= 2 over the polytope
/// (Lebesgue measure), via a pulling triangulation and closed-form simplex
/// moments.  `reversed` selects an independent triangulation (apex choice);
/// both must agree.
Rat integrate(const DelzantPolytope& p, const Poly2& q, bool reversed = false);

/// Exact integral of an affine polynomial over the boundary, each facet
/// carrying Lebesgue measure normalised so the facet lattice has covolume 1.
Rat boundary_integrate(const DelzantPolytope& p, const Poly2& q);

/// Lattice length of the edge leaving `vertex` along edge direction k, i.e.
/// the parameter at which the adjacent vertex is reached.
Rat edge_lattice_length(const DelzantPolytope& p, int vertex, int k);

// --- text format -----------------------------------------------------------
//
//   # comment
//   dim <n>
//   facet <a1> ... <an> <c>      (meaning a.x >= c)

DelzantPolytope parse_polytope(std::istream& in);
DelzantPolytope parse_polytope_file(const std::string& path);
std::string format_polytope(const DelzantPolytope& p);

}  // namespace kstab

#endif
