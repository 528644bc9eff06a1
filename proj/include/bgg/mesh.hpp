/**
 * Simplicial complexes of polyhedral domains with exact rational vertices:
 * closure completion, boundary/interior classification, orientation
 * functions, simplicial boundary matrices, mesh generators and text I/O.
 */

#ifndef BGG_MESH_HPP
#define BGG_MESH_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgg/matrix.hpp"
#include "bgg/poly.hpp"
#include "bgg/rational.hpp"

namespace bgg {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OrientationVariant { Relative, Standard };

class SimplicialComplex {
  public:
    SimplicialComplex(int dim, std::vector<Vec3> vertices, const std::vector<std::vector<int>>& cells)
        : dim_(dim), vertices_(std::move(vertices)) {
        if (dim != 2 && dim != 3) throw TopologyError("dimension must be 2 or 3");
        build(cells);
    }

    int dim() const { return dim_; }
    const std::vector<Vec3>& vertices() const { return vertices_; }
    const Vec3& vertex(int i) const { return vertices_.at(i); }

    int count(int k) const { return static_cast<int>(simplices_.at(k).size()); }
    int interior_count(int k) const { return static_cast<int>(interior_ids_.at(k).size()); }
    const std::vector<int>& interior_ids(int k) const { return interior_ids_.at(k); }

    const std::vector<int>& simplex(int k, int id) const { return simplices_.at(k).at(id); }
    bool is_boundary(int k, int id) const { return boundary_flag_.at(k).at(id); }

    /// Position of a simplex among the eligible ones of its dimension
    /// (all simplices for Standard, interior only for Relative); -1 if excluded.
    int position(int k, int id, OrientationVariant v) const {
        return v == OrientationVariant::Standard ? id : interior_pos_.at(k).at(id);
    }
    int eligible_count(int k, OrientationVariant v) const {
        return v == OrientationVariant::Standard ? count(k) : interior_count(k);
    }

    int simplex_id(int k, const std::vector<int>& verts) const {
        auto key = verts;
        std::sort(key.begin(), key.end());
        auto it = simplex_index_.at(k).find(key);
        return it == simplex_index_.at(k).end() ? -1 : it->second;
    }

    /// (k+1)-simplices containing the given k-simplex.
    const std::vector<int>& cofaces(int k, int id) const { return cofaces_.at(k).at(id); }

    /// Orientation sign of the canonical increasing-order vertex tuple of a
    /// top cell (+1 if its signed volume is positive).  Recorded so that a
    /// cell given in either vertex-order parity denotes the same positively
    /// oriented simplex.
    int cell_sign(int cell_id) const { return cell_sign_.at(cell_id); }

    /**
     * Combinatorial orientation function: (-1)^j if tau is sigma with its
     * j-th vertex (1-based, canonical increasing order) removed, else 0;
     * Relative variant additionally vanishes on boundary tau.
     */
    int orientation_sign(int k_tau, int tau_id, int sigma_id, OrientationVariant variant) const {
        if (k_tau < 0 || k_tau + 1 > dim_) throw TopologyError("orientation_sign: dimension mismatch");
        if (variant == OrientationVariant::Relative && is_boundary(k_tau, tau_id)) return 0;
        const auto& t = simplex(k_tau, tau_id);
        const auto& s = simplex(k_tau + 1, sigma_id);
        int missing = -1;
        size_t ti = 0;
        for (size_t si = 0; si < s.size(); ++si) {
            if (ti < t.size() && t[ti] == s[si]) {
                ++ti;
            } else if (missing < 0) {
                missing = static_cast<int>(si);
            } else {
                return 0;
            }
        }
        if (ti != t.size() || missing < 0) return 0;
        return (missing + 1) % 2 == 0 ? 1 : -1; // (-1)^j with j = missing+1 (1-based)
    }

    /**
     * Matrix of the simplicial boundary operator from C_k to C_{k-1},
     * block-tensored with a coeff_dim-dimensional coefficient space.
     * Top-cell columns carry the recorded volume-parity sign.
     */
    ExactMatrix boundary_matrix(int k, OrientationVariant variant, int coeff_dim = 1) const {
        if (k < 1 || k > dim_) throw TopologyError("boundary_matrix: degree out of range");
        if (coeff_dim < 1) throw TopologyError("boundary_matrix: coeff_dim must be positive");
        ExactMatrix m(eligible_count(k - 1, variant) * coeff_dim, eligible_count(k, variant) * coeff_dim);
        for (int sid = 0; sid < count(k); ++sid) {
            int col = position(k, sid, variant);
            if (col < 0) continue;
            int s_extra = (k == dim_) ? cell_sign(sid) : 1;
            for (int f = 0; f <= k; ++f) {
                auto facet = simplex(k, sid);
                facet.erase(facet.begin() + f);
                int tid = simplex_id(k - 1, facet);
                int row = position(k - 1, tid, variant);
                if (row < 0) continue;
                int sgn = orientation_sign(k - 1, tid, sid, variant) * s_extra;
                if (sgn == 0) continue;
                for (int c = 0; c < coeff_dim; ++c)
                    m.add(row * coeff_dim + c, col * coeff_dim + c, Rational(sgn));
            }
        }
        return m;
    }

    // ------------------------ geometry payloads ---------------------------

    /// Edge tangent t_e = x2 - x1 (canonical increasing order), unnormalized.
    Vec3 edge_tangent(int eid) const {
        const auto& e = simplex(1, eid);
        return vertex(e[1]) - vertex(e[0]);
    }

    /// 2D edge normal n_e = t_e^perp.
    Vec3 edge_normal_2d(int eid) const { return perp2d(edge_tangent(eid)); }

    /// 3D face normal n_f = (v1-v0) x (v2-v0), unnormalized.
    Vec3 face_normal_3d(int fid) const {
        const auto& f = simplex(2, fid);
        return cross(vertex(f[1]) - vertex(f[0]), vertex(f[2]) - vertex(f[0]));
    }

    /// 3D edge normal pair: n_{e,+} = t_e x a (a = first axis not parallel
    /// to t_e), n_{e,-} = t_e x n_{e,+}; both orthogonal to t_e.
    std::pair<Vec3, Vec3> edge_normals_3d(int eid) const {
        Vec3 t = edge_tangent(eid);
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 a{Rational(axis == 0), Rational(axis == 1), Rational(axis == 2)};
            Vec3 np = cross(t, a);
            if (!is_zero_vec(np)) return {np, cross(t, np)};
        }
        throw TopologyError("degenerate edge");
    }

    Vec3 centroid(int k, int id) const {
        Vec3 c{0, 0, 0};
        const auto& s = simplex(k, id);
        for (int v : s) c = c + vertex(v);
        return Rational(1, static_cast<int>(s.size())) * c;
    }

    /**
     * Geometric outward sign of a (dim-1)-facet relative to an incident top
     * cell: +1 iff the facet's direction payload (edge_normal_2d /
     * face_normal_3d) points out of the cell.
     */
    int outward_sign(int facet_id, int cell_id) const {
        Vec3 n = dim_ == 2 ? edge_normal_2d(facet_id) : face_normal_3d(facet_id);
        Rational s = dot(n, centroid(dim_ - 1, facet_id) - centroid(dim_, cell_id));
        if (s == 0) throw TopologyError("degenerate facet/cell pair");
        return sign_of(s);
    }

    /// Affine parametrization of a simplex by the reference k-simplex,
    /// anchored at the canonical first vertex.
    AffineMap affine_map(int k, int id) const {
        const auto& s = simplex(k, id);
        AffineMap m;
        m.base = vertex(s[0]);
        for (int i = 1; i <= k; ++i) m.dirs.push_back(vertex(s[i]) - vertex(s[0]));
        return m;
    }

    /// lambda_v for each vertex of cell (canonical order): affine Poly in x.
    std::vector<Poly> cell_barycentric(int cell_id) const {
        const auto& s = simplex(dim_, cell_id);
        int n = dim_ + 1;
        DenseMatrix a(n, std::vector<Rational>(n));
        for (int j = 0; j < n; ++j) {
            a[0][j] = 1;
            for (int i = 0; i < dim_; ++i) a[i + 1][j] = vertex(s[j])[i];
        }
        DenseMatrix inv = dense_inverse(a); // row j of inv = coefficients of lambda_j in basis {1,x,y(,z)}
        std::vector<Poly> out(n);
        for (int j = 0; j < n; ++j) {
            out[j] = Poly(inv[j][0]);
            for (int i = 0; i < dim_; ++i) out[j] = out[j] + Poly::var(i) * inv[j][i + 1];
        }
        return out;
    }

  private:
    void build(const std::vector<std::vector<int>>& cells_in) {
        simplices_.assign(dim_ + 1, {});
        simplex_index_.assign(dim_ + 1, {});
        if (cells_in.empty()) throw TopologyError("mesh has no cells");

        // Canonicalize and deduplicate top cells.
        std::vector<std::vector<int>> cells;
        for (const auto& c : cells_in) {
            if (static_cast<int>(c.size()) != dim_ + 1) throw TopologyError("cell with wrong vertex count");
            auto s = c;
            for (int v : s)
                if (v < 0 || v >= static_cast<int>(vertices_.size()))
                    throw TopologyError("cell references vertex " + std::to_string(v) + " out of range");
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw TopologyError("degenerate cell (repeated vertex)");
            cells.push_back(std::move(s));
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

        // Closure: all sub-simplices of all cells, globally sorted.
        std::vector<std::vector<std::vector<int>>> pool(dim_ + 1);
        for (const auto& c : cells) {
            int m = dim_ + 1;
            for (int mask = 1; mask < (1 << m); ++mask) {
                std::vector<int> sub;
                for (int i = 0; i < m; ++i)
                    if (mask & (1 << i)) sub.push_back(c[i]);
                pool[static_cast<int>(sub.size()) - 1].push_back(std::move(sub));
            }
        }
        for (int k = 0; k <= dim_; ++k) {
            auto& v = pool[k];
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            simplices_[k] = v;
            for (int i = 0; i < static_cast<int>(v.size()); ++i) simplex_index_[k][v[i]] = i;
        }

        // Coface incidence.
        cofaces_.assign(dim_ + 1, {});
        for (int k = 0; k < dim_; ++k) {
            cofaces_[k].assign(count(k), {});
            for (int sid = 0; sid < count(k + 1); ++sid) {
                const auto& s = simplices_[k + 1][sid];
                for (size_t drop = 0; drop < s.size(); ++drop) {
                    auto face = s;
                    face.erase(face.begin() + static_cast<long>(drop));
                    cofaces_[k][simplex_index_[k].at(face)].push_back(sid);
                }
            }
        }
        cofaces_[dim_].assign(count(dim_), {});

        // Volume signs; reject degenerate cells.
        cell_sign_.resize(count(dim_));
        for (int cid = 0; cid < count(dim_); ++cid) {
            const auto& c = simplices_[dim_][cid];
            Rational det;
            if (dim_ == 2) {
                Vec3 a = vertex(c[1]) - vertex(c[0]), b = vertex(c[2]) - vertex(c[0]);
                det = a[0] * b[1] - a[1] * b[0];
            } else {
                det = dot(vertex(c[1]) - vertex(c[0]),
                          cross(vertex(c[2]) - vertex(c[0]), vertex(c[3]) - vertex(c[0])));
            }
            if (det == 0) throw TopologyError("zero-volume cell");
            cell_sign_[cid] = sign_of(det);
        }

        // Facet incidence sanity: each (dim-1)-simplex in at most 2 cells.
        for (int fid = 0; fid < count(dim_ - 1); ++fid)
            if (cofaces_[dim_ - 1][fid].size() > 2)
                throw TopologyError("facet shared by more than two cells");

        // Boundary classification: facets with exactly one incident cell,
        // then downward closure.
        boundary_flag_.assign(dim_ + 1, {});
        boundary_flag_[dim_].assign(count(dim_), false);
        boundary_flag_[dim_ - 1].assign(count(dim_ - 1), false);
        for (int fid = 0; fid < count(dim_ - 1); ++fid)
            boundary_flag_[dim_ - 1][fid] = cofaces_[dim_ - 1][fid].size() == 1;
        for (int k = dim_ - 2; k >= 0; --k) {
            boundary_flag_[k].assign(count(k), false);
            for (int sid = 0; sid < count(k); ++sid)
                for (int up : cofaces_[k][sid])
                    if (boundary_flag_[k + 1][up]) {
                        boundary_flag_[k][sid] = true;
                        break;
                    }
        }

        // Dangling vertices are topology errors (every vertex must appear).
        if (count(0) != static_cast<int>(vertices_.size())) throw TopologyError("dangling vertex (not in any cell)");

        // Connectivity of the union of top cells (via facet adjacency).
        std::vector<int> comp(count(dim_), -1);
        std::vector<int> stack{0};
        comp[0] = 0;
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            const auto& cv = simplices_[dim_][c];
            for (size_t drop = 0; drop < cv.size(); ++drop) {
                auto face = cv;
                face.erase(face.begin() + static_cast<long>(drop));
                for (int nb : cofaces_[dim_ - 1][simplex_index_[dim_ - 1].at(face)])
                    if (comp[nb] < 0) {
                        comp[nb] = 0;
                        stack.push_back(nb);
                    }
            }
        }
        for (int c : comp)
            if (c < 0) throw TopologyError("mesh is not connected");

        // Interior enumerations.
        interior_ids_.assign(dim_ + 1, {});
        interior_pos_.assign(dim_ + 1, {});
        for (int k = 0; k <= dim_; ++k) {
            interior_pos_[k].assign(count(k), -1);
            for (int i = 0; i < count(k); ++i)
                if (!boundary_flag_[k][i]) {
                    interior_pos_[k][i] = static_cast<int>(interior_ids_[k].size());
                    interior_ids_[k].push_back(i);
                }
        }
    }

    int dim_;
    std::vector<Vec3> vertices_;
    std::vector<std::vector<std::vector<int>>> simplices_;
    std::vector<std::map<std::vector<int>, int>> simplex_index_;
    std::vector<std::vector<bool>> boundary_flag_;
    std::vector<std::vector<std::vector<int>>> cofaces_;
    std::vector<std::vector<int>> interior_ids_;
    std::vector<std::vector<int>> interior_pos_;
    std::vector<int> cell_sign_;
};

// ---------------------------------------------------------------------------
// Text format I/O
// ---------------------------------------------------------------------------

inline SimplicialComplex load_mesh_stream(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    size_t pos = 0;
    auto next = [&](const char* what) -> std::string {
        if (pos >= tokens.size()) throw ParseError(std::string("unexpected end of mesh file, expected ") + what);
        return tokens[pos++];
    };
    auto next_int = [&](const char* what) -> long {
        std::string t = next(what);
        try {
            size_t used = 0;
            long v = std::stol(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ParseError(std::string("malformed integer for ") + what + ": " + t);
        }
    };
    if (next("'dim'") != "dim") throw ParseError("mesh file must start with 'dim D'");
    long dim = next_int("dimension");
    if (dim != 2 && dim != 3) throw ParseError("dimension must be 2 or 3");
    if (next("'vertices'") != "vertices") throw ParseError("expected 'vertices N'");
    long nv = next_int("vertex count");
    if (nv <= 0) throw ParseError("vertex count must be positive");
    std::vector<Vec3> verts(nv, Vec3{0, 0, 0});
    for (long i = 0; i < nv; ++i)
        for (long d = 0; d < dim; ++d) {
            try {
                verts[i][d] = parse_rational(next("vertex coordinate"));
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what());
            }
        }
    if (next("'cells'") != "cells") throw ParseError("expected 'cells M'");
    long nc = next_int("cell count");
    if (nc <= 0) throw ParseError("cell count must be positive");
    std::vector<std::vector<int>> cells(nc);
    for (long i = 0; i < nc; ++i)
        for (long d = 0; d <= dim; ++d) cells[i].push_back(static_cast<int>(next_int("cell vertex index")));
    if (pos != tokens.size()) throw ParseError("trailing tokens in mesh file");
    return SimplicialComplex(static_cast<int>(dim), std::move(verts), cells);
}

inline SimplicialComplex load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file: " + path);
    return load_mesh_stream(in);
}

inline std::string mesh_to_text(const SimplicialComplex& m) {
    std::ostringstream os;
    os << "dim " << m.dim() << "\n";
    os << "vertices " << m.count(0) << "\n";
    for (int i = 0; i < m.count(0); ++i) {
        for (int d = 0; d < m.dim(); ++d) os << (d ? " " : "") << to_string(m.vertex(i)[d]);
        os << "\n";
    }
    os << "cells " << m.count(m.dim()) << "\n";
    for (int c = 0; c < m.count(m.dim()); ++c) {
        const auto& s = m.simplex(m.dim(), c);
        for (size_t j = 0; j < s.size(); ++j) os << (j ? " " : "") << s[j];
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline SimplicialComplex generate_mesh(const std::string& kind, int res) {
    if (res < 1) throw TopologyError("resolution must be >= 1");
    auto carved = [&](const char* what) {
        if (res < 3) throw TopologyError(std::string("resolution too small to carve a ") + what + " (need >= 3)");
    };

    if (kind == "square" || kind == "square-with-hole") {
        if (kind == "square-with-hole") carved("hole");
        auto vid = [&](int i, int j) { return j * (res + 1) + i; };
        std::vector<Vec3> verts;
        for (int j = 0; j <= res; ++j)
            for (int i = 0; i <= res; ++i) verts.push_back(vec3(Rational(i, res), Rational(j, res)));
        std::vector<std::vector<int>> cells;
        for (int j = 0; j < res; ++j)
            for (int i = 0; i < res; ++i) {
                if (kind == "square-with-hole" && i >= 1 && i <= res - 2 && j >= 1 && j <= res - 2) continue;
                cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
                cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
            }
        if (kind == "square-with-hole") {
            // Hole vertices are dangling; compact the vertex set.
            std::vector<int> used(verts.size(), -1);
            std::vector<Vec3> keep;
            for (auto& c : cells)
                for (int& v : c) {
                    if (used[v] < 0) {
                        used[v] = static_cast<int>(keep.size());
                        keep.push_back(verts[v]);
                    }
                    v = used[v];
                }
            return SimplicialComplex(2, std::move(keep), cells);
        }
        return SimplicialComplex(2, std::move(verts), cells);
    }

    if (kind == "criss-cross-square") {
        std::vector<Vec3> verts;
        auto vid = [&](int i, int j) { return j * (res + 1) + i; };
        for (int j = 0; j <= res; ++j)
            for (int i = 0; i <= res; ++i) verts.push_back(vec3(Rational(i, res), Rational(j, res)));
        int base = static_cast<int>(verts.size());
        std::vector<std::vector<int>> cells;
        for (int j = 0; j < res; ++j)
            for (int i = 0; i < res; ++i) {
                int m = base + j * res + i;
                int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
                cells.push_back({a, b, m});
                cells.push_back({b, c, m});
                cells.push_back({c, d, m});
                cells.push_back({d, a, m});
            }
        for (int j = 0; j < res; ++j)
            for (int i = 0; i < res; ++i)
                verts.push_back(vec3(Rational(2 * i + 1, 2 * res), Rational(2 * j + 1, 2 * res)));
        return SimplicialComplex(2, std::move(verts), cells);
    }

    if (kind == "cube" || kind == "cube-with-tunnel" || kind == "cube-with-cavity") {
        if (kind != "cube") carved(kind == "cube-with-tunnel" ? "tunnel" : "cavity");
        auto vid = [&](int i, int j, int k) { return (k * (res + 1) + j) * (res + 1) + i; };
        std::vector<Vec3> verts;
        for (int k = 0; k <= res; ++k)
            for (int j = 0; j <= res; ++j)
                for (int i = 0; i <= res; ++i)
                    verts.push_back(vec3(Rational(i, res), Rational(j, res), Rational(k, res)));
        const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        std::vector<std::vector<int>> cells;
        for (int k = 0; k < res; ++k)
            for (int j = 0; j < res; ++j)
                for (int i = 0; i < res; ++i) {
                    bool mid_ij = i >= 1 && i <= res - 2 && j >= 1 && j <= res - 2;
                    if (kind == "cube-with-tunnel" && mid_ij) continue;
                    if (kind == "cube-with-cavity" && mid_ij && k >= 1 && k <= res - 2) continue;
                    for (const auto& p : perms) {
                        int c[3] = {i, j, k};
                        std::vector<int> tet{vid(c[0], c[1], c[2])};
                        for (int step = 0; step < 3; ++step) {
                            ++c[p[step]];
                            tet.push_back(vid(c[0], c[1], c[2]));
                        }
                        cells.push_back(std::move(tet));
                    }
                }
        if (kind != "cube") {
            std::vector<int> used(verts.size(), -1);
            std::vector<Vec3> keep;
            for (auto& c : cells)
                for (int& v : c) {
                    if (used[v] < 0) {
                        used[v] = static_cast<int>(keep.size());
                        keep.push_back(verts[v]);
                    }
                    v = used[v];
                }
            return SimplicialComplex(3, std::move(keep), cells);
        }
        return SimplicialComplex(3, std::move(verts), cells);
    }

    throw TopologyError("unknown mesh generator kind: " + kind);
}

} // namespace bgg

#endif // BGG_MESH_HPP
