/**
 * Basis atoms for all discrete spaces of the distributional Hessian and
 * divdiv complexes: enumeration of global bases, local element kernels
 * (rotated Regge, TDNNS with normal-normal bubbles, the 14-dimensional
 * traceless space with tangential-normal edge dofs), and exact evaluation
 * of the distributional atoms on polynomial test fields.
 */

#ifndef BGG_SPACES_HPP
#define BGG_SPACES_HPP

#include <array>
#include <string>
#include <vector>

#include "bgg/homology.hpp"
#include "bgg/matrix.hpp"
#include "bgg/mesh.hpp"
#include "bgg/poly.hpp"

namespace bgg {

enum class AtomKind {
    LagrangeHat,      // scalar hat at a vertex
    VecLagrangeHat,   // vector hat, slot = axis
    EdgeNNDelta,      // 2D: delta_e[n_e (x) n_e]
    FaceNNDelta,      // 3D: delta_f[n_f (x) n_f]
    EdgeNTDelta,      // 3D: delta_e[n_{e,slot} (x) t_e], slot 0 = '+', 1 = '-'
    VertexVecDelta,   // vector delta at a vertex, slot = axis
    VertexScalarDelta,// scalar delta at a vertex
    CellPoly,         // discontinuous P1, slot = global monomial index
    AuxFaceDist,      // 3D first-order face distribution, slot = monomial index
    AuxEdgeDist,      // first-order edge distribution (2D level 1 / 3D level 2)
    AuxVertexDist,    // first-order vertex distribution (top level)
    ReggeNN,          // 2D rotated-Regge atom dual to the edge nn moment
    TDNNSFace,        // 3D constant-symmetric atom dual to the face nn moment
    TDNNSBubble,      // 3D cell atom dual to a normal-normal bubble moment, slot 0/1
    MCSEdge,          // 3D traceless atom dual to the edge nt moment, slot 0/1
    MCSBubble         // 3D traceless atom dual to a bubble curl moment, slot 0/1
};

struct BasisAtom {
    AtomKind kind;
    int simplex;
    int slot;
    bool operator==(const BasisAtom&) const = default;
};

struct SpaceBasis {
    std::string space_id;
    bool bc = false;
    std::vector<BasisAtom> atoms;
    int dim() const { return static_cast<int>(atoms.size()); }
};

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace detail {

inline void enumerate(SpaceBasis& b, const SimplicialComplex& m, int k, bool interior_only, AtomKind kind,
                      int slots) {
    for (int id = 0; id < m.count(k); ++id) {
        if (interior_only && m.is_boundary(k, id)) continue;
        for (int s = 0; s < slots; ++s) b.atoms.push_back({kind, id, s});
    }
}

} // namespace detail

/**
 * Build the atom basis of one space of the complexes.  Space ids: "V0".."V3"
 * (Hessian family), "U0".."U3" (divdiv family), "U1hat"/"U2hat" (trimmed,
 * 3D), "Vaux0".."Vaux3" (auxiliary piecewise/distributional spaces).
 * bc selects the homogeneous-boundary-condition variant.
 */
inline SpaceBasis build_space(const std::string& id, const SimplicialComplex& m, bool bc) {
    const int n = m.dim();
    SpaceBasis b;
    b.space_id = id;
    b.bc = bc;
    auto bad = [&]() { return std::invalid_argument("space " + id + " is not defined on a " + std::to_string(n) + "D mesh"); };

    if (id == "V0") {
        detail::enumerate(b, m, 0, bc, AtomKind::LagrangeHat, 1);
    } else if (id == "V1") {
        if (n == 2) detail::enumerate(b, m, 1, !bc, AtomKind::EdgeNNDelta, 1);
        else detail::enumerate(b, m, 2, !bc, AtomKind::FaceNNDelta, 1);
    } else if (id == "V2") {
        if (n == 2) detail::enumerate(b, m, 0, !bc, AtomKind::VertexVecDelta, 2);
        else detail::enumerate(b, m, 1, !bc, AtomKind::EdgeNTDelta, 2);
    } else if (id == "V3") {
        if (n != 3) throw bad();
        detail::enumerate(b, m, 0, !bc, AtomKind::VertexVecDelta, 3);
    } else if (id == "U0") {
        detail::enumerate(b, m, 0, bc, AtomKind::VecLagrangeHat, n);
    } else if (id == "U1" || (id == "U1hat" && n == 3)) {
        if (n == 2) {
            if (id == "U1hat") throw bad();
            detail::enumerate(b, m, 1, bc, AtomKind::ReggeNN, 1);
        } else {
            detail::enumerate(b, m, 1, bc, AtomKind::MCSEdge, 2);
            if (id == "U1") detail::enumerate(b, m, 3, false, AtomKind::MCSBubble, 2);
        }
    } else if (id == "U2" || (id == "U2hat" && n == 3)) {
        if (n == 2) {
            if (id == "U2hat") throw bad();
            detail::enumerate(b, m, 0, !bc, AtomKind::VertexScalarDelta, 1);
        } else {
            detail::enumerate(b, m, 2, bc, AtomKind::TDNNSFace, 1);
            if (id == "U2") detail::enumerate(b, m, 3, false, AtomKind::TDNNSBubble, 2);
        }
    } else if (id == "U3") {
        if (n != 3) throw bad();
        detail::enumerate(b, m, 0, !bc, AtomKind::VertexScalarDelta, 1);
    } else if (id == "Vaux0") {
        detail::enumerate(b, m, n, false, AtomKind::CellPoly, n + 1);
    } else if (id == "Vaux1") {
        if (n == 2) detail::enumerate(b, m, 1, !bc, AtomKind::AuxEdgeDist, 3);
        else detail::enumerate(b, m, 2, !bc, AtomKind::AuxFaceDist, 4);
    } else if (id == "Vaux2") {
        if (n == 2) detail::enumerate(b, m, 0, !bc, AtomKind::AuxVertexDist, 3);
        else detail::enumerate(b, m, 1, !bc, AtomKind::AuxEdgeDist, 4);
    } else if (id == "Vaux3") {
        if (n != 3) throw bad();
        detail::enumerate(b, m, 0, !bc, AtomKind::AuxVertexDist, 4);
    } else {
        throw std::invalid_argument("unknown space id: " + id);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Local element kernels
// ---------------------------------------------------------------------------

/// The global monomial indexed by an aux-distribution slot: {1, x, y(, z)}.
inline Poly aux_monomial(int slot) { return slot == 0 ? Poly(Rational(1)) : Poly::var(slot - 1); }

/// Constant symmetric matrices from coordinate vectors and back.
/// 2D coords (a11, a22, a12); 3D coords (a11, a22, a33, a23, a13, a12).
inline MatPoly sym_from_coords(const std::vector<Rational>& c, int dim) {
    MatPoly s;
    if (dim == 2) {
        s[0][0] = Poly(c[0]);
        s[1][1] = Poly(c[1]);
        s[0][1] = s[1][0] = Poly(c[2]);
    } else {
        s[0][0] = Poly(c[0]);
        s[1][1] = Poly(c[1]);
        s[2][2] = Poly(c[2]);
        s[1][2] = s[2][1] = Poly(c[3]);
        s[0][2] = s[2][0] = Poly(c[4]);
        s[0][1] = s[1][0] = Poly(c[5]);
    }
    return s;
}

inline int sym_space_dim(int dim) { return dim == 2 ? 3 : 6; }

/// n.sigma.n as a linear functional of the sym coordinate vector.
inline std::vector<Rational> nn_functional(const Vec3& nv, int dim) {
    if (dim == 2) return {nv[0] * nv[0], nv[1] * nv[1], 2 * nv[0] * nv[1]};
    return {nv[0] * nv[0], nv[1] * nv[1], nv[2] * nv[2],
            2 * nv[1] * nv[2], 2 * nv[0] * nv[2], 2 * nv[0] * nv[1]};
}

/// Edges of a cell as (simplex id, local vertex pair), canonical order.
inline std::vector<int> cell_edges(const SimplicialComplex& m, int cell) {
    const auto& s = m.simplex(m.dim(), cell);
    std::vector<int> edges;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j) edges.push_back(m.simplex_id(1, {s[i], s[j]}));
    return edges;
}

inline std::vector<int> cell_faces(const SimplicialComplex& m, int cell) {
    const auto& s = m.simplex(3, cell);
    std::vector<int> faces;
    for (size_t drop = 0; drop < s.size(); ++drop) {
        auto f = s;
        f.erase(f.begin() + static_cast<long>(drop));
        faces.push_back(m.simplex_id(2, f));
    }
    return faces;
}

/**
 * 2D rotated-Regge dual basis on one cell: the three constant symmetric
 * matrices dual to the edge normal-normal moments l_e(sigma) = n_e.sigma.n_e
 * (constant fields; unnormalized payloads).  Returned in cell_edges order.
 */
inline std::vector<MatPoly> regge_dual_basis(const SimplicialComplex& m, int cell) {
    auto edges = cell_edges(m, cell);
    DenseMatrix dof(3, std::vector<Rational>(3));
    for (int r = 0; r < 3; ++r) {
        auto row = nn_functional(m.edge_normal_2d(edges[r]), 2);
        for (int c = 0; c < 3; ++c) dof[r][c] = row[c];
    }
    DenseMatrix inv = dense_inverse(dof);
    std::vector<MatPoly> out;
    for (int r = 0; r < 3; ++r) {
        std::vector<Rational> coords(3);
        for (int c = 0; c < 3; ++c) coords[c] = inv[c][r];
        out.push_back(sym_from_coords(coords, 2));
    }
    return out;
}

/**
 * Basis of the normal-normal bubble space B_K: constant symmetric matrices
 * with n_f.sigma.n_f = 0 on all four faces of the cell.  Always
 * 2-dimensional for a nondegenerate tetrahedron.
 */
inline std::vector<MatPoly> tdnns_bubble_basis(const SimplicialComplex& m, int cell) {
    auto faces = cell_faces(m, cell);
    DenseMatrix constraints(4, std::vector<Rational>(6));
    for (int r = 0; r < 4; ++r) {
        auto row = nn_functional(m.face_normal_3d(faces[r]), 3);
        for (int c = 0; c < 6; ++c) constraints[r][c] = row[c];
    }
    auto kernel = dense_kernel_basis(constraints, 6);
    if (kernel.size() != 2) throw TopologyError("degenerate cell: normal-normal bubble space is not 2-dimensional");
    std::vector<MatPoly> out;
    for (const auto& v : kernel) out.push_back(sym_from_coords(v, 3));
    return out;
}

/// Frobenius product of two constant symmetric matrices given as MatPoly.
inline Rational const_frobenius(const MatPoly& a, const MatPoly& b) {
    Rational s(0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a[i][j].eval(Vec3{0, 0, 0}) * b[i][j].eval(Vec3{0, 0, 0});
    return s;
}

struct TdnnsDual {
    std::vector<MatPoly> face_fields;   // aligned with cell_faces order
    std::vector<MatPoly> bubble_fields; // two bubble atoms
};

/**
 * TDNNS dual basis on one cell: constant symmetric matrices dual to the
 * dofs (face nn moments, normalized so that l_f(sigma) = n_f.sigma.n_f for
 * constants) and (Frobenius moments against the nn bubbles, reference
 * integral).
 */
inline TdnnsDual tdnns_dual_basis(const SimplicialComplex& m, int cell) {
    auto faces = cell_faces(m, cell);
    auto bubbles = tdnns_bubble_basis(m, cell);
    DenseMatrix dof(6, std::vector<Rational>(6));
    for (int r = 0; r < 4; ++r) {
        auto row = nn_functional(m.face_normal_3d(faces[r]), 3);
        for (int c = 0; c < 6; ++c) dof[r][c] = row[c];
    }
    // Bubble rows: integral over the reference cell of sigma : b = (1/6) sigma:b.
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 6; ++c) {
            std::vector<Rational> unit(6, Rational(0));
            unit[c] = 1;
            dof[4 + r][c] = Rational(1, 6) * const_frobenius(sym_from_coords(unit, 3), bubbles[r]);
        }
    DenseMatrix inv = dense_inverse(dof);
    TdnnsDual out;
    for (int r = 0; r < 6; ++r) {
        std::vector<Rational> coords(6);
        for (int c = 0; c < 6; ++c) coords[c] = inv[c][r];
        (r < 4 ? out.face_fields : out.bubble_fields).push_back(sym_from_coords(coords, 3));
    }
    return out;
}

/**
 * The 14-dimensional local shape space of the 3D first divdiv space:
 * constant traceless matrices (8) plus the fields x -> x x sigma for the
 * six-dimensional symmetric basis (columnwise cross product).
 */
inline std::vector<MatPoly> u1_local_shape_basis(const SimplicialComplex& m, int cell) {
    (void)m;
    (void)cell;
    std::vector<MatPoly> shapes;
    // Traceless constants: E11 - E33, E22 - E33, and the six off-diagonal units.
    for (int d = 0; d < 2; ++d) {
        MatPoly t;
        t[d][d] = Poly(Rational(1));
        t[2][2] = Poly(Rational(-1));
        shapes.push_back(t);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            MatPoly t;
            t[i][j] = Poly(Rational(1));
            shapes.push_back(t);
        }
    // x x S for the symmetric coordinate basis.
    for (int c = 0; c < 6; ++c) {
        std::vector<Rational> unit(6, Rational(0));
        unit[c] = 1;
        shapes.push_back(cross_cols(position_poly(), sym_from_coords(unit, 3)));
    }
    return shapes;
}

/// Edge nt moment of a (possibly linear) matrix field over one edge:
/// reference integral of n_{e,slot} . sigma(x(t)) . t_e.
inline Rational edge_nt_moment(const SimplicialComplex& m, int edge, int slot, const MatPoly& sigma) {
    auto [np, nm] = m.edge_normals_3d(edge);
    const Vec3& nv = slot == 0 ? np : nm;
    Vec3 t = m.edge_tangent(edge);
    Poly integrand = dot(nv, mat_vec(sigma, t));
    return reference_integral(integrand, m.affine_map(1, edge), 3);
}

/**
 * The 14x14 unisolvency matrix of the local traceless space: rows are the
 * 12 edge nt moments (cell_edges order, '+' then '-') followed by the two
 * bubble curl moments; columns are u1_local_shape_basis.
 */
inline ExactMatrix u1_dof_matrix(const SimplicialComplex& m, int cell) {
    auto shapes = u1_local_shape_basis(m, cell);
    auto edges = cell_edges(m, cell);
    auto bubbles = tdnns_bubble_basis(m, cell);
    AffineMap cmap = m.affine_map(3, cell);
    ExactMatrix d(14, 14);
    for (int c = 0; c < 14; ++c) {
        for (int le = 0; le < 6; ++le)
            for (int slot = 0; slot < 2; ++slot)
                d.set(2 * le + slot, c, edge_nt_moment(m, edges[le], slot, shapes[c]));
        MatPoly curl = curl_rows3(shapes[c]);
        for (int r = 0; r < 2; ++r) {
            Poly integrand = frobenius(curl, bubbles[r]);
            d.set(12 + r, c, reference_integral(integrand, cmap, 3));
        }
    }
    return d;
}

struct McsDual {
    std::vector<MatPoly> edge_fields;   // 12: cell_edges order, slot-major ('+','-') per edge
    std::vector<MatPoly> bubble_fields; // 2
};

/// Dual basis of the 14 local dofs as fields on the given cell.
inline McsDual mcs_dual_basis(const SimplicialComplex& m, int cell) {
    auto shapes = u1_local_shape_basis(m, cell);
    DenseMatrix inv = dense_inverse(dense_from(u1_dof_matrix(m, cell)));
    McsDual out;
    for (int r = 0; r < 14; ++r) {
        MatPoly field;
        for (int c = 0; c < 14; ++c)
            if (inv[c][r] != 0) field = field + inv[c][r] * shapes[c];
        (r < 12 ? out.edge_fields : out.bubble_fields).push_back(field);
    }
    return out;
}

/// Ranks of devgrad: P1-vectors -> local space and symcurl: local space -> S.
inline std::pair<int, int> local_sequence_ranks(const SimplicialComplex& m, int cell) {
    // devgrad images of the 12 fields {e_i, x_j e_i} are constant traceless
    // matrices; collect coordinates and take the exact rank.
    ExactMatrix dg(9, 12);
    int col = 0;
    for (int i = 0; i < 3; ++i, ++col) (void)0; // constant fields e_i: devgrad = 0
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            VecPoly u;
            u[i] = Poly::var(j);
            MatPoly g = deviatoric(grad_vec(u, 3), 3);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) dg.set(3 * a + b, col, g[a][b].eval(Vec3{0, 0, 0}));
            ++col;
        }
    auto shapes = u1_local_shape_basis(m, cell);
    ExactMatrix sc(9, 14);
    for (int c = 0; c < 14; ++c) {
        MatPoly s = sym(curl_rows3(shapes[c]));
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) sc.set(3 * a + b, c, s[a][b].eval(Vec3{0, 0, 0}));
    }
    return {dg.rank(), sc.rank()};
}

// ---------------------------------------------------------------------------
// Atom actions on polynomial test fields (exact, rational)
//
// Every action is a plain reference-pullback integral with unnormalized
// direction payloads; the missing metric factors of the unit-vector
// surface-measure definitions cancel exactly against the payload norms.
// ---------------------------------------------------------------------------

/// Action of a matrix-test distribution atom on a smooth matrix field.
inline Rational action_on_matrix(const SimplicialComplex& m, const BasisAtom& a, const MatPoly& phi) {
    switch (a.kind) {
        case AtomKind::EdgeNNDelta: {
            Vec3 nv = m.edge_normal_2d(a.simplex);
            return reference_integral(bilinear(nv, phi, nv), m.affine_map(1, a.simplex), 2);
        }
        case AtomKind::FaceNNDelta: {
            Vec3 nv = m.face_normal_3d(a.simplex);
            return 2 * reference_integral(bilinear(nv, phi, nv), m.affine_map(2, a.simplex), 3);
        }
        case AtomKind::EdgeNTDelta: {
            auto [np, nm] = m.edge_normals_3d(a.simplex);
            const Vec3& nv = a.slot == 0 ? np : nm;
            Vec3 t = m.edge_tangent(a.simplex);
            return reference_integral(dot(nv, mat_vec(phi, t)), m.affine_map(1, a.simplex), 3);
        }
        case AtomKind::AuxEdgeDist: {
            Poly p = aux_monomial(a.slot);
            if (m.dim() == 2) {
                // <v1_e[p], sigma> = int_e (div sym(sigma).n_e) p - sym(sigma):(grad p (x) n_e)
                Vec3 nv = m.edge_normal_2d(a.simplex);
                MatPoly s = sym(phi);
                Poly integrand = dot(div_rows(s, 2), vec_poly(nv)) * p -
                                 frobenius(s, outer_poly(grad(p, 2), nv));
                return reference_integral(integrand, m.affine_map(1, a.simplex), 2);
            }
            // 3D: <v2_e[p], sigma> = -int_e dev(sigma):(grad p (x) t_e) + 1/2 int_e (div dev(sigma).t_e) p
            Vec3 t = m.edge_tangent(a.simplex);
            MatPoly d = deviatoric(phi, 3);
            Poly integrand = -frobenius(d, outer_poly(grad(p, 3), t)) +
                             Rational(1, 2) * (dot(div_rows(d, 3), vec_poly(t)) * p);
            return reference_integral(integrand, m.affine_map(1, a.simplex), 3);
        }
        case AtomKind::AuxFaceDist: {
            // <v1_f[p], sigma> = int_f (div sym(sigma).n_f) p - sym(sigma):(grad p (x) n_f)
            Poly p = aux_monomial(a.slot);
            Vec3 nv = m.face_normal_3d(a.simplex);
            MatPoly s = sym(phi);
            Poly integrand = dot(div_rows(s, 3), vec_poly(nv)) * p -
                             frobenius(s, outer_poly(grad(p, 3), nv));
            return reference_integral(integrand, m.affine_map(2, a.simplex), 3);
        }
        default:
            throw std::invalid_argument("atom does not act on matrix fields");
    }
}

/// Action of a vector-test distribution atom on a smooth vector field.
inline Rational action_on_vector(const SimplicialComplex& m, const BasisAtom& a, const VecPoly& w) {
    switch (a.kind) {
        case AtomKind::VertexVecDelta:
            return w[a.slot].eval(m.vertex(a.simplex));
        case AtomKind::AuxVertexDist: {
            Poly p = aux_monomial(a.slot);
            const Vec3& x = m.vertex(a.simplex);
            if (m.dim() == 2) // (w . grad p - 1/2 div w p)(x)
                return dot(grad(p, 2), w).eval(x) - Rational(1, 2) * divergence(w, 2).eval(x) * p.eval(x);
            // 3D: (q . grad p - 1/3 div q p)(x)
            return dot(grad(p, 3), w).eval(x) - Rational(1, 3) * divergence(w, 3).eval(x) * p.eval(x);
        }
        default:
            throw std::invalid_argument("atom does not act on vector fields");
    }
}

/// Action of a scalar-test distribution atom on a smooth scalar field.
inline Rational action_on_scalar(const SimplicialComplex& m, const BasisAtom& a, const Poly& v) {
    if (a.kind != AtomKind::VertexScalarDelta) throw std::invalid_argument("atom does not act on scalar fields");
    return v.eval(m.vertex(a.simplex));
}

/// True volume integral of a scalar polynomial over one cell.
inline Rational cell_volume_integral(const SimplicialComplex& m, int cell, const Poly& integrand) {
    AffineMap map = m.affine_map(m.dim(), cell);
    Rational det;
    if (m.dim() == 2) det = map.dirs[0][0] * map.dirs[1][1] - map.dirs[0][1] * map.dirs[1][0];
    else det = dot(map.dirs[0], cross(map.dirs[1], map.dirs[2]));
    if (det < 0) det = -det;
    return det * reference_integral(integrand, map, m.dim());
}

} // namespace bgg

#endif // BGG_SPACES_HPP
