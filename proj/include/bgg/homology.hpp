/**
 * Simplicial homology over Q (standard and relative variants), expected
 * cohomology tables for the distributional complexes, the
 * restriction-boundary (tilde) complexes with affine coefficients, and
 * their vertex-patch decomposition.
 */

#ifndef BGG_HOMOLOGY_HPP
#define BGG_HOMOLOGY_HPP

#include <string>
#include <vector>

#include "bgg/matrix.hpp"
#include "bgg/mesh.hpp"

namespace bgg {

using BettiVector = std::vector<int>;

/// dim H_k = dim C_k - rank d_k - rank d_{k+1}, k = 0..dim.
inline BettiVector homology_dims(const SimplicialComplex& m, OrientationVariant v) {
    int n = m.dim();
    std::vector<int> ranks(n + 2, 0);
    for (int k = 1; k <= n; ++k) ranks[k] = m.boundary_matrix(k, v).rank();
    BettiVector h(n + 1);
    for (int k = 0; k <= n; ++k) h[k] = m.eligible_count(k, v) - ranks[k] - ranks[k + 1];
    return h;
}

/// True when the complex id carries homogeneous boundary conditions
/// (trailing "0" on the family name, e.g. "hessian0-2d").
inline bool kind_has_bc(const std::string& kind) {
    auto dash = kind.rfind('-');
    return dash != std::string::npos && dash > 0 && kind[dash - 1] == '0';
}

/**
 * Expected cohomology dimensions of one of the distributional complexes:
 * de Rham Betti numbers of the domain (plain variants) or their
 * compactly-supported counterparts (BC variants), times the dimension
 * n+1 of the coefficient space (P1 for the Hessian family, RT for the
 * divdiv family).  Degree k of the complex corresponds to simplicial
 * degree n-k, by duality.
 */
inline std::vector<int> expected_cohomology(const std::string& kind, const SimplicialComplex& m) {
    static const char* families[] = {"hessian", "hessian0", "divdiv", "divdiv0",
                                     "aux-hessian", "aux-hessian0", "trimmed-divdiv", "trimmed-divdiv0"};
    auto dash = kind.rfind('-');
    std::string family = dash == std::string::npos ? kind : kind.substr(0, dash);
    bool known = false;
    for (const char* f : families) known = known || family == f;
    std::string dims = dash == std::string::npos ? "" : kind.substr(dash + 1);
    if (!known || (dims != "2d" && dims != "3d")) throw std::invalid_argument("unknown complex kind: " + kind);
    if ((dims == "2d") != (m.dim() == 2)) throw std::invalid_argument("complex kind does not match mesh dimension");

    int n = m.dim();
    BettiVector h = homology_dims(m, kind_has_bc(kind) ? OrientationVariant::Standard : OrientationVariant::Relative);
    std::vector<int> out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = h[n - k] * (n + 1);
    return out;
}

// ---------------------------------------------------------------------------
// Affine coefficient spaces on simplices.
//
// P1(sigma) for a k-simplex is the (k+1)-dimensional space of affine
// functions on sigma.  Basis convention: top cells use the global monomials
// {1, x, y(, z)}; lower simplices use the parametric monomials {1, t_1..t_k}
// of the canonical affine parametrization.
// ---------------------------------------------------------------------------

/// Coefficients of the restriction of a global affine polynomial p to the
/// given simplex, in the simplex's P1 basis.
inline std::vector<Rational> p1_coordinates(const SimplicialComplex& m, int k, int id, const Poly& p) {
    if (p.degree() > 1) throw std::invalid_argument("p1_coordinates: polynomial is not affine");
    if (k == m.dim()) {
        std::vector<Rational> c(m.dim() + 1, Rational(0));
        for (const auto& [mono, coef] : p.terms()) {
            int total = mono[0] + mono[1] + mono[2];
            if (total == 0) c[0] = coef;
            else
                for (int v = 0; v < m.dim(); ++v)
                    if (mono[v] == 1) c[v + 1] = coef;
        }
        return c;
    }
    Poly q = pullback(p, m.affine_map(k, id), m.dim());
    std::vector<Rational> c(k + 1, Rational(0));
    for (const auto& [mono, coef] : q.terms()) {
        int total = mono[0] + mono[1] + mono[2];
        if (total == 0) c[0] = coef;
        else
            for (int v = 0; v < k; ++v)
                if (mono[v] == 1) c[v + 1] = coef;
    }
    return c;
}

/// The P1 basis of a simplex as global polynomials is not well defined
/// (lower-simplex basis functions are functions on the simplex only); what
/// is well defined is a set of global affine representatives, one per basis
/// function, whose restrictions form the basis.
inline std::vector<Poly> p1_representatives(const SimplicialComplex& m, int k, int id) {
    std::vector<Poly> reps;
    if (k == m.dim()) {
        reps.push_back(Poly(Rational(1)));
        for (int v = 0; v < m.dim(); ++v) reps.push_back(Poly::var(v));
        return reps;
    }
    // Parametric monomial t_i = lambda_{i}(x) within the simplex: use the
    // barycentric-style dual representation t_i = a_i . (x - base) with a_i
    // the dual basis of the direction vectors (computed via a Gram solve).
    AffineMap map = m.affine_map(k, id);
    int kk = map.k();
    DenseMatrix gram(kk, std::vector<Rational>(kk));
    for (int i = 0; i < kk; ++i)
        for (int j = 0; j < kk; ++j) gram[i][j] = dot(map.dirs[i], map.dirs[j]);
    DenseMatrix ginv = dense_inverse(gram);
    reps.push_back(Poly(Rational(1)));
    for (int i = 0; i < kk; ++i) {
        Vec3 a{0, 0, 0};
        for (int j = 0; j < kk; ++j) a = a + ginv[i][j] * map.dirs[j];
        Poly p;
        for (int v = 0; v < m.dim(); ++v) p = p + Poly::var(v) * a[v];
        reps.push_back(p - Poly(dot(a, map.base)));
    }
    return reps;
}

/**
 * Matrix of the tilde boundary operator at degree k: the map
 * (+)_{k-simplices} P1 -> (+)_{(k-1)-simplices} P1 combining the simplicial
 * boundary sign with exact restriction of affine functions.  Relative
 * variant keeps interior simplices only; top-cell columns carry the
 * volume-parity sign, mirroring boundary_matrix.
 */
inline ExactMatrix tilde_boundary_matrix(const SimplicialComplex& m, int k, OrientationVariant variant) {
    if (k < 1 || k > m.dim()) throw TopologyError("tilde_boundary_matrix: degree out of range");
    // Column offsets per eligible simplex (block sizes vary with degree).
    int col_block = (k == m.dim()) ? m.dim() + 1 : k + 1;
    int row_block = k; // (k-1)-simplices are never top cells here since k <= dim
    ExactMatrix mat(m.eligible_count(k - 1, variant) * row_block, m.eligible_count(k, variant) * col_block);
    for (int sid = 0; sid < m.count(k); ++sid) {
        int col = m.position(k, sid, variant);
        if (col < 0) continue;
        int s_extra = (k == m.dim()) ? m.cell_sign(sid) : 1;
        std::vector<Poly> reps = p1_representatives(m, k, sid);
        for (int f = 0; f <= k; ++f) {
            auto facet = m.simplex(k, sid);
            facet.erase(facet.begin() + f);
            int tid = m.simplex_id(k - 1, facet);
            int row = m.position(k - 1, tid, variant);
            if (row < 0) continue;
            int sgn = m.orientation_sign(k - 1, tid, sid, variant) * s_extra;
            if (sgn == 0) continue;
            for (int b = 0; b < col_block; ++b) {
                std::vector<Rational> c = p1_coordinates(m, k - 1, tid, reps[b]);
                for (int r = 0; r < row_block; ++r)
                    mat.add(row * row_block + r, col * col_block + b, Rational(sgn) * c[r]);
            }
        }
    }
    return mat;
}

/// Degreewise dimensions of the tilde complex (chain degree k = simplex dim).
inline std::vector<int> tilde_dims(const SimplicialComplex& m, OrientationVariant variant) {
    std::vector<int> d(m.dim() + 1);
    for (int k = 0; k <= m.dim(); ++k)
        d[k] = m.eligible_count(k, variant) * ((k == m.dim()) ? m.dim() + 1 : k + 1);
    return d;
}

/// Cohomology dimensions of the tilde complex; cohomological index j
/// corresponds to chain degree dim - j.
inline std::vector<int> tilde_cohomology_dims(const SimplicialComplex& m, OrientationVariant variant) {
    int n = m.dim();
    std::vector<int> dims = tilde_dims(m, variant);
    std::vector<int> ranks(n + 2, 0);
    for (int k = 1; k <= n; ++k) ranks[k] = tilde_boundary_matrix(m, k, variant).rank();
    std::vector<int> h(n + 1);
    for (int j = 0; j <= n; ++j) {
        int k = n - j;
        h[j] = dims[k] - ranks[k] - ranks[k + 1];
    }
    return h;
}

// ---------------------------------------------------------------------------
// Vertex patch decomposition of the tilde complex.
// ---------------------------------------------------------------------------

struct PatchComplex {
    int vertex = -1;
    std::vector<int> dims;            // dims[k]: eligible k-simplices containing the vertex
    std::vector<ExactMatrix> boundary; // boundary[k]: C_k -> C_{k-1}, k = 1..dim (index 0 unused)
};

inline std::vector<int> patch_homology_dims(const PatchComplex& p) {
    int n = static_cast<int>(p.dims.size()) - 1;
    std::vector<int> ranks(n + 2, 0);
    for (int k = 1; k <= n; ++k) ranks[k] = p.boundary[k].rank();
    std::vector<int> h(n + 1);
    for (int k = 0; k <= n; ++k) h[k] = p.dims[k] - ranks[k] - ranks[k + 1];
    return h;
}

/**
 * The per-vertex scalar chain complexes whose direct sum matches the tilde
 * complex degreewise: for each vertex v, degree-k chain space spanned by
 * the eligible k-simplices containing v, with boundary signs restricted to
 * facets still containing v.
 */
inline std::vector<PatchComplex> vertex_patch_split(const SimplicialComplex& m, OrientationVariant variant) {
    int n = m.dim();
    std::vector<PatchComplex> out;
    for (int v = 0; v < m.count(0); ++v) {
        PatchComplex pc;
        pc.vertex = v;
        pc.dims.assign(n + 1, 0);
        // Local enumeration of eligible simplices containing v, per degree.
        std::vector<std::vector<int>> local(n + 1);      // local index -> simplex id
        std::vector<std::vector<int>> local_pos(n + 1);  // simplex id -> local index or -1
        for (int k = 0; k <= n; ++k) {
            local_pos[k].assign(m.count(k), -1);
            for (int id = 0; id < m.count(k); ++id) {
                const auto& s = m.simplex(k, id);
                if (m.position(k, id, variant) < 0) continue;
                if (!std::binary_search(s.begin(), s.end(), v)) continue;
                local_pos[k][id] = static_cast<int>(local[k].size());
                local[k].push_back(id);
            }
            pc.dims[k] = static_cast<int>(local[k].size());
        }
        pc.boundary.resize(n + 1);
        for (int k = 1; k <= n; ++k) {
            ExactMatrix b(pc.dims[k - 1], pc.dims[k]);
            for (int li = 0; li < pc.dims[k]; ++li) {
                int sid = local[k][li];
                int s_extra = (k == n) ? m.cell_sign(sid) : 1;
                for (int f = 0; f <= k; ++f) {
                    auto facet = m.simplex(k, sid);
                    facet.erase(facet.begin() + f);
                    int tid = m.simplex_id(k - 1, facet);
                    int row = local_pos[k - 1][tid];
                    if (row < 0) continue;
                    int sgn = m.orientation_sign(k - 1, tid, sid, variant) * s_extra;
                    if (sgn != 0) b.add(row, li, Rational(sgn));
                }
            }
            pc.boundary[k] = std::move(b);
        }
        out.push_back(std::move(pc));
    }
    return out;
}

} // namespace bgg

#endif // BGG_HOMOLOGY_HPP
