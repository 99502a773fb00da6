#include "kstab/polytope.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace kstab {

namespace {

std::string vec_str(const RatVec& v) {
    return "(" + format_rational_vector(v) + ")";
}

bool lex_less(const RatVec& a, const RatVec& b) {
    for (int i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return a(i) < b(i);
    return false;
}

int affine_rank(const std::vector<RatVec>& pts) {
    if (pts.empty()) return -1;
    if (pts.size() == 1) return 0;
    RatMat diffs(pts[0].size(), pts.size() - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.col(static_cast<int>(i - 1)) = pts[i] - pts[0];
    return rank(diffs);
}

// Enumerates sorted index subsets of {0..m-1} of the given size.
void for_each_subset(int m, int size, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> sel;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(sel.size()) == size) {
            fn(sel);
            return;
        }
        for (int i = start; i < m; ++i) {
            sel.push_back(i);
            rec(i + 1);
            sel.pop_back();
        }
    };
    rec(0);
}

}  // namespace

int DelzantPolytope::vertex_index(const RatVec& coords) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].coords == coords) return static_cast<int>(i);
    throw DomainError("NotAVertex", vec_str(coords) + " is not a vertex of the polytope");
}

const Face& DelzantPolytope::face_by_active_set(const std::set<int>& active) const {
    for (const Face& f : faces_)
        if (f.active == active) return f;
    throw DomainError("NotAFace", "no face with the given active facet set");
}

DelzantPolytope validate_delzant(int dim, const std::vector<Facet>& facets) {
    if (dim < 1) throw DomainError("NotFullDimensional", "dimension must be positive");
    const int m = static_cast<int>(facets.size());
    if (m < dim + 1)
        throw DomainError("Unbounded", "at least " + std::to_string(dim + 1) +
                                           " facets are required to bound dimension " +
                                           std::to_string(dim));

    for (int i = 0; i < m; ++i) {
        const RatVec& a = facets[i].normal;
        if (a.size() != dim)
            throw DomainError("NonPrimitiveNormal",
                              "facet " + std::to_string(i) + " has wrong normal length");
        bool all_zero = true;
        for (int j = 0; j < dim; ++j) {
            if (!is_integer(a(j)))
                throw DomainError("NonPrimitiveNormal", "facet " + std::to_string(i) +
                                                            " has non-integer normal " + vec_str(a));
            if (a(j) != 0) all_zero = false;
        }
        if (all_zero)
            throw DomainError("NonPrimitiveNormal",
                              "facet " + std::to_string(i) + " has zero normal");
        if (content(a) != 1)
            throw DomainError("NonPrimitiveNormal", "facet " + std::to_string(i) +
                                                        " has imprimitive normal " + vec_str(a));
    }

    RatMat normals(m, dim);
    for (int i = 0; i < m; ++i) normals.row(i) = facets[i].normal;

    // Recession directions.  A nontrivial recession cone is witnessed either
    // by a kernel direction of the normal matrix or by the kernel direction
    // of some (dim-1)-subset of rank dim-1.
    auto recedes = [&](const RatVec& d) {
        for (int i = 0; i < m; ++i)
            if (facets[i].normal.dot(d) < 0) return false;
        return true;
    };
    if (rank(normals) < dim) {
        RatVec d = kernel(normals).col(0);
        throw DomainError("Unbounded", "recession direction " + vec_str(primitivize(d)));
    }
    if (dim == 1) {
        for (int s : {+1, -1}) {
            RatVec d(1);
            d(0) = s;
            if (recedes(d))
                throw DomainError("Unbounded", "recession direction " + vec_str(d));
        }
    } else {
        std::optional<RatVec> witness;
        for_each_subset(m, dim - 1, [&](const std::vector<int>& sel) {
            if (witness) return;
            RatMat sub(dim - 1, dim);
            for (int i = 0; i < dim - 1; ++i) sub.row(i) = facets[sel[i]].normal;
            RatMat kern = kernel(sub);
            if (kern.cols() != 1) return;
            RatVec d = kern.col(0);
            if (recedes(d)) witness = primitivize(d);
            else {
                RatVec nd = -d;
                if (recedes(nd)) witness = primitivize(nd);
            }
        });
        if (witness)
            throw DomainError("Unbounded", "recession direction " + vec_str(*witness));
    }

    // Vertex enumeration by exact solves over all dim-subsets of facets.
    std::vector<RatVec> points;
    for_each_subset(m, dim, [&](const std::vector<int>& sel) {
        RatMat a(dim, dim);
        RatVec b(dim);
        for (int i = 0; i < dim; ++i) {
            a.row(i) = facets[sel[i]].normal;
            b(i) = facets[sel[i]].offset;
        }
        auto x = solve(a, b);
        if (!x) return;
        for (int i = 0; i < m; ++i)
            if (facets[i].normal.dot(*x) < facets[i].offset) return;
        points.push_back(*x);
    });
    std::sort(points.begin(), points.end(), lex_less);
    points.erase(std::unique(points.begin(), points.end(),
                             [](const RatVec& a, const RatVec& b) { return a == b; }),
                 points.end());

    if (points.empty())
        throw DomainError("NotFullDimensional", "the facet system has empty intersection");
    if (affine_rank(points) < dim)
        throw DomainError("NotFullDimensional",
                          "vertices span an affine subspace of dimension " +
                              std::to_string(affine_rank(points)));

    DelzantPolytope p;
    p.dim_ = dim;
    p.facets_ = facets;

    for (const RatVec& x : points) {
        VertexData vd;
        vd.coords = x;
        for (int i = 0; i < m; ++i)
            if (facets[i].normal.dot(x) == facets[i].offset) vd.active.push_back(i);
        if (static_cast<int>(vd.active.size()) > dim)
            throw DomainError("NonSimpleVertex", "vertex " + vec_str(x) + " lies on " +
                                                     std::to_string(vd.active.size()) + " facets");
        // dim facets by construction; solve for the dual (edge) directions.
        RatMat nv(dim, dim);
        for (int i = 0; i < dim; ++i) nv.row(i) = facets[vd.active[i]].normal;
        auto inv = inverse(nv);
        if (!inv)
            throw DomainError("NonSimpleVertex",
                              "active facets at vertex " + vec_str(x) + " are dependent");
        RatMat edges(dim, dim);
        for (int i = 0; i < dim; ++i) edges.col(i) = primitivize(inv->col(i));
        Rat d = det(edges);
        if (d != 1 && d != -1)
            throw DomainError("NonUnimodularVertex",
                              "edge generators at vertex " + vec_str(x) +
                                  " span a sublattice of index " +
                                  format_rational(boost::multiprecision::abs(d)));
        for (int i = 0; i < dim; ++i) vd.edge_generators.push_back(edges.col(i));
        p.vertices_.push_back(std::move(vd));
    }

    // Face lattice: close the vertex active sets under intersection, then
    // canonicalise each candidate to the full facet set of its face.
    std::set<std::set<int>> candidates;
    for (const auto& v : p.vertices_) candidates.insert(std::set<int>(v.active.begin(), v.active.end()));
    candidates.insert(std::set<int>{});
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::set<int>> cur(candidates.begin(), candidates.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j) {
                std::set<int> inter;
                std::set_intersection(cur[i].begin(), cur[i].end(), cur[j].begin(), cur[j].end(),
                                      std::inserter(inter, inter.begin()));
                if (candidates.insert(inter).second) grew = true;
            }
    }
    std::map<std::set<int>, Face> by_canon;
    for (const auto& a : candidates) {
        std::vector<int> verts;
        for (std::size_t vi = 0; vi < p.vertices_.size(); ++vi) {
            const auto& act = p.vertices_[vi].active;
            if (std::includes(act.begin(), act.end(), a.begin(), a.end()))
                verts.push_back(static_cast<int>(vi));
        }
        if (verts.empty()) continue;
        std::set<int> canon(p.vertices_[verts[0]].active.begin(), p.vertices_[verts[0]].active.end());
        for (int vi : verts) {
            std::set<int> next;
            const auto& act = p.vertices_[vi].active;
            std::set_intersection(canon.begin(), canon.end(), act.begin(), act.end(),
                                  std::inserter(next, next.begin()));
            canon = std::move(next);
        }
        if (by_canon.count(canon)) continue;
        Face f;
        f.active = canon;
        f.vertex_indices = verts;
        std::vector<RatVec> pts;
        for (int vi : verts) pts.push_back(p.vertices_[vi].coords);
        f.dimension = affine_rank(pts);
        by_canon.emplace(canon, std::move(f));
    }
    for (auto& [k, f] : by_canon) p.faces_.push_back(f);
    std::sort(p.faces_.begin(), p.faces_.end(), [](const Face& a, const Face& b) {
        if (a.dimension != b.dimension) return a.dimension > b.dimension;
        return a.active < b.active;
    });
    return p;
}

Rat edge_lattice_length(const DelzantPolytope& p, int vertex, int k) {
    const auto& vd = p.vertices().at(vertex);
    const RatVec& e = vd.edge_generators.at(k);
    std::optional<Rat> best;
    for (const auto& f : p.facets()) {
        Rat slope = f.normal.dot(e);
        if (slope >= 0) continue;
        Rat tmax = (f.normal.dot(vd.coords) - f.offset) / (-slope);
        if (!best || tmax < *best) best = tmax;
    }
    if (!best) throw DomainError("Unbounded", "edge ray never exits the polytope");
    return *best;
}

DelzantPolytope chop_corner(const DelzantPolytope& p, int vertex, const Rat& t) {
    if (vertex < 0 || vertex >= static_cast<int>(p.vertices().size()))
        throw DomainError("NotAVertex", "vertex index " + std::to_string(vertex) + " out of range");
    if (t <= 0) throw std::invalid_argument("chop_corner: t must be positive");
    const auto& vd = p.vertices()[vertex];
    const int n = p.dim();

    for (int k = 0; k < n; ++k) {
        Rat len = edge_lattice_length(p, vertex, k);
        if (t >= len)
            throw DomainError("ChopTooLarge",
                              "t = " + format_rational(t) + " reaches the far endpoint of the edge " +
                                  vec_str(vd.edge_generators[k]) + " at vertex " + vec_str(vd.coords) +
                                  " (lattice length " + format_rational(len) + ")");
    }

    RatMat edges(n, n);
    for (int i = 0; i < n; ++i) edges.col(i) = vd.edge_generators[i];
    RatMat einv = *inverse(edges);  // unimodular, hence integer
    RatVec s = RatVec::Zero(n);
    for (int i = 0; i < n; ++i) s += einv.row(i).transpose();
    // Sum of a lattice basis is primitive.
    std::vector<Facet> facets = p.facets();
    facets.push_back(Facet{s, s.dot(vd.coords) + t});
    return validate_delzant(n, facets);
}

// --- integration ------------------------------------------------------------

namespace {

// Pulling triangulation of a face, returned as tuples of vertex indices.
std::vector<std::vector<int>> triangulate_face(const DelzantPolytope& p, const Face& face,
                                               bool reversed) {
    if (static_cast<int>(face.vertex_indices.size()) == face.dimension + 1)
        return {face.vertex_indices};
    // Apex: lexicographically extreme vertex of the face.
    int apex = face.vertex_indices[0];
    for (int vi : face.vertex_indices) {
        bool better = reversed ? lex_less(p.vertices()[apex].coords, p.vertices()[vi].coords)
                               : lex_less(p.vertices()[vi].coords, p.vertices()[apex].coords);
        if (better) apex = vi;
    }
    std::vector<std::vector<int>> out;
    for (const Face& g : p.faces()) {
        if (g.dimension != face.dimension - 1) continue;
        if (!std::includes(g.active.begin(), g.active.end(), face.active.begin(), face.active.end()))
            continue;
        if (std::find(g.vertex_indices.begin(), g.vertex_indices.end(), apex) != g.vertex_indices.end())
            continue;
        for (auto s : triangulate_face(p, g, reversed)) {
            s.push_back(apex);
            out.push_back(std::move(s));
        }
    }
    return out;
}

// Integral of q over a d-simplex given its vertices and d-volume.
Rat simplex_integral(const Poly2& q, const std::vector<RatVec>& pts, const Rat& volume) {
    const long d = static_cast<long>(pts.size()) - 1;
    Rat lin_sum = 0, quad_diag = 0;
    RatVec vsum = RatVec::Zero(pts[0].size());
    const RatMat& quad = q.quadratic_part();
    for (const RatVec& x : pts) {
        lin_sum += q.linear_part().dot(x);
        quad_diag += x.dot(quad * x);
        vsum += x;
    }
    Rat quad_term = (quad_diag + vsum.dot(quad * vsum)) / Rat((d + 1) * (d + 2));
    return volume * (q.constant_term() + lin_sum / Rat(d + 1) + quad_term);
}

}  // namespace

Rat integrate(const DelzantPolytope& p, const Poly2& q, bool reversed) {
    if (q.vars() != p.dim()) throw std::invalid_argument("integrate: variable count mismatch");
    const int n = p.dim();
    Rat total = 0;
    for (const auto& simplex : triangulate_face(p, p.whole_polytope_face(), reversed)) {
        std::vector<RatVec> pts;
        for (int vi : simplex) pts.push_back(p.vertices()[vi].coords);
        RatMat diff(n, n);
        for (int i = 1; i <= n; ++i) diff.col(i - 1) = pts[i] - pts[0];
        Rat vol = boost::multiprecision::abs(det(diff)) / factorial(n);
        if (vol == 0) continue;
        total += simplex_integral(q, pts, vol);
    }
    return total;
}

Rat boundary_integrate(const DelzantPolytope& p, const Poly2& q) {
    if (q.vars() != p.dim()) throw std::invalid_argument("boundary_integrate: variable count mismatch");
    if (q.degree() > 1)
        throw DomainError("DegreeTooHigh", "boundary integrals support affine integrands only");
    const int n = p.dim();
    Rat total = 0;
    for (const Face& f : p.faces()) {
        if (f.dimension != n - 1) continue;
        if (n == 1) {
            // A facet of a segment is a point; the boundary "integral" is the
            // sum of vertex values.
            total += q(p.vertices()[f.vertex_indices[0]].coords);
            continue;
        }
        // Lattice basis of the facet hyperplane's direction space.
        const int fi = *f.active.begin();
        RatMat basis = integer_kernel_basis(p.facets()[fi].normal);
        // Select n-1 independent rows of the basis once, for exact coordinate solves.
        RatMat bsub(n - 1, n - 1);
        std::vector<int> rows;
        for (int r = 0; r < n && static_cast<int>(rows.size()) < n - 1; ++r) {
            rows.push_back(r);
            RatMat trial(rows.size(), n - 1);
            for (std::size_t i = 0; i < rows.size(); ++i)
                trial.row(static_cast<int>(i)) = basis.row(rows[i]);
            if (rank(trial) != static_cast<int>(rows.size())) rows.pop_back();
        }
        for (int i = 0; i < n - 1; ++i) bsub.row(i) = basis.row(rows[i]);
        auto to_lattice_coords = [&](const RatVec& w) {
            RatVec rhs(n - 1);
            for (int i = 0; i < n - 1; ++i) rhs(i) = w(rows[i]);
            return *solve(bsub, rhs);
        };
        for (const auto& simplex : triangulate_face(p, f, false)) {
            std::vector<RatVec> pts;
            for (int vi : simplex) pts.push_back(p.vertices()[vi].coords);
            RatMat y(n - 1, n - 1);
            for (int i = 1; i < n; ++i) y.col(i - 1) = to_lattice_coords(pts[i] - pts[0]);
            Rat vol = boost::multiprecision::abs(det(y)) / factorial(n - 1);
            if (vol == 0) continue;
            total += simplex_integral(q, pts, vol);
        }
    }
    return total;
}

// --- text format -------------------------------------------------------------

DelzantPolytope parse_polytope(std::istream& in) {
    std::string line;
    int lineno = 0;
    int dim = -1;
    std::vector<Facet> facets;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream is(line);
        std::string word;
        if (!(is >> word)) continue;
        if (word == "dim") {
            if (dim != -1) throw ParseError(lineno, "duplicate dim line");
            if (!(is >> dim) || dim < 1) throw ParseError(lineno, "expected a positive dimension");
        } else if (word == "facet") {
            if (dim == -1) throw ParseError(lineno, "facet before dim line");
            std::vector<std::string> toks;
            std::string t;
            while (is >> t) toks.push_back(t);
            if (static_cast<int>(toks.size()) != dim + 1)
                throw ParseError(lineno, "expected " + std::to_string(dim + 1) +
                                             " entries after 'facet', got " +
                                             std::to_string(toks.size()));
            Facet f;
            f.normal = RatVec(dim);
            try {
                for (int i = 0; i < dim; ++i) f.normal(i) = parse_rational(toks[i]);
                f.offset = parse_rational(toks[dim]);
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
            facets.push_back(std::move(f));
        } else {
            throw ParseError(lineno, "unknown directive '" + word + "'");
        }
    }
    if (dim == -1) throw ParseError("missing dim line");
    return validate_delzant(dim, facets);
}

DelzantPolytope parse_polytope_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_polytope(in);
}

std::string format_polytope(const DelzantPolytope& p) {
    std::ostringstream os;
    os << "dim " << p.dim() << "\n";
    for (const auto& f : p.facets()) {
        os << "facet";
        for (int i = 0; i < p.dim(); ++i) os << " " << f.normal(i);
        os << " " << f.offset << "\n";
    }
    return os.str();
}

}  // namespace kstab
