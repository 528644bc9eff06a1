/**
 * Assembly of the distributional Hessian and divdiv complexes: every
 * differential operator, the auxiliary piecewise-P1 complexes with their
 * vertical maps (kappa, g, iota), and the duality pairings, all as exact
 * sparse rational matrices between enumerated atom bases.
 */

#ifndef BGG_OPERATORS_HPP
#define BGG_OPERATORS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bgg/spaces.hpp"

namespace bgg {

struct AssemblyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A fully assembled cochain complex: spaces[0] -> ... -> spaces.back().
struct ComplexAssembly {
    std::string kind;
    bool bc = false;
    std::vector<SpaceBasis> spaces;
    std::vector<ExactMatrix> ops;      // ops[k]: spaces[k] -> spaces[k+1]
    std::vector<std::string> op_names; // one per operator
};

namespace detail {

struct AtomIndex {
    std::map<std::tuple<AtomKind, int, int>, int> index;
    explicit AtomIndex(const SpaceBasis& b) {
        for (int i = 0; i < b.dim(); ++i) {
            const auto& a = b.atoms[static_cast<size_t>(i)];
            index.emplace(std::make_tuple(a.kind, a.simplex, a.slot), i);
        }
    }
    /// -1 if the atom is not part of the space.
    int find(AtomKind k, int simplex, int slot = 0) const {
        auto it = index.find(std::make_tuple(k, simplex, slot));
        return it == index.end() ? -1 : it->second;
    }
};

/// Lazily computed per-cell element data.
struct CellCache {
    const SimplicialComplex& m;
    std::vector<std::optional<std::vector<MatPoly>>> regge;
    std::vector<std::optional<TdnnsDual>> tdnns;
    std::vector<std::optional<McsDual>> mcs;
    std::vector<std::optional<std::vector<MatPoly>>> bubbles;
    std::vector<std::optional<std::vector<Poly>>> bary;

    explicit CellCache(const SimplicialComplex& mesh) : m(mesh) {
        size_t n = static_cast<size_t>(m.count(m.dim()));
        regge.resize(n);
        tdnns.resize(n);
        mcs.resize(n);
        bubbles.resize(n);
        bary.resize(n);
    }
    const std::vector<MatPoly>& regge_dual(int K) {
        auto& slot = regge[static_cast<size_t>(K)];
        if (!slot) slot = regge_dual_basis(m, K);
        return *slot;
    }
    const TdnnsDual& tdnns_dual(int K) {
        auto& slot = tdnns[static_cast<size_t>(K)];
        if (!slot) slot = tdnns_dual_basis(m, K);
        return *slot;
    }
    const McsDual& mcs_dual(int K) {
        auto& slot = mcs[static_cast<size_t>(K)];
        if (!slot) slot = mcs_dual_basis(m, K);
        return *slot;
    }
    const std::vector<MatPoly>& bubble_basis(int K) {
        auto& slot = bubbles[static_cast<size_t>(K)];
        if (!slot) slot = tdnns_bubble_basis(m, K);
        return *slot;
    }
    const std::vector<Poly>& barycentric(int K) {
        auto& slot = bary[static_cast<size_t>(K)];
        if (!slot) slot = m.cell_barycentric(K);
        return *slot;
    }
    /// Constant gradient of the barycentric function of vertex v on cell K
    /// (zero if v is not a vertex of K).
    Vec3 hat_gradient(int v, int K) {
        const auto& s = m.simplex(m.dim(), K);
        const auto& lam = barycentric(K);
        for (size_t j = 0; j < s.size(); ++j)
            if (s[j] == v) {
                Vec3 g{0, 0, 0};
                for (int i = 0; i < m.dim(); ++i) g[static_cast<size_t>(i)] = lam[j].diff(i).eval(Vec3{0, 0, 0});
                return g;
            }
        return Vec3{0, 0, 0};
    }
};

inline Vec3 eval_vec(const VecPoly& v, const Vec3& x) { return {v[0].eval(x), v[1].eval(x), v[2].eval(x)}; }

/// Top cells whose closure contains the given k-simplex.
inline std::vector<int> star_cells(const SimplicialComplex& m, int k, int id) {
    if (k == m.dim()) return {id};
    if (k == m.dim() - 1) return m.cofaces(k, id);
    const auto& t = m.simplex(k, id);
    std::vector<int> out;
    for (int K = 0; K < m.count(m.dim()); ++K) {
        const auto& s = m.simplex(m.dim(), K);
        if (std::includes(s.begin(), s.end(), t.begin(), t.end())) out.push_back(K);
    }
    return out;
}

/// Evaluate a constant MatPoly entrywise.
inline std::array<Vec3, 3> const_rows(const MatPoly& s) {
    std::array<Vec3, 3> r;
    Vec3 zero{0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[static_cast<size_t>(i)][static_cast<size_t>(j)] = s[i][j].eval(zero);
    return r;
}

inline Vec3 rows_times(const std::array<Vec3, 3>& r, const Vec3& v) {
    return {dot(r[0], v), dot(r[1], v), dot(r[2], v)};
}

/// Record a value that must coincide with any previously recorded value for
/// the same matrix entry (trace single-valuedness across cells).
inline void set_single_valued(ExactMatrix& mat, int r, int c, const Rational& v,
                              std::map<std::pair<int, int>, Rational>& seen, const char* what) {
    auto key = std::make_pair(r, c);
    auto it = seen.find(key);
    if (it != seen.end()) {
        if (it->second != v) throw AssemblyError(std::string(what) + ": trace is not single-valued across cells");
        return;
    }
    seen.emplace(key, v);
    if (v != 0) mat.set(r, c, v);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Hessian complexes
// ---------------------------------------------------------------------------

/// hess: V0 -> V1 in 2D.  Column of a hat u: the edge atom A_e carries the
/// negated jump of the normal derivative, -sum_f s_geo(e,f) (grad u|_f . n_e),
/// divided by |n_e|^2 to account for the unnormalized payload.
inline ExactMatrix assemble_hess_2d(const SimplicialComplex& m, bool bc) {
    if (m.dim() != 2) throw AssemblyError("assemble_hess_2d: 2D mesh required");
    SpaceBasis dom = build_space("V0", m, bc), ran = build_space("V1", m, bc);
    detail::AtomIndex ridx(ran);
    detail::CellCache cache(m);
    ExactMatrix mat(ran.dim(), dom.dim());
    for (int c = 0; c < dom.dim(); ++c) {
        int v = dom.atoms[static_cast<size_t>(c)].simplex;
        for (int K : detail::star_cells(m, 0, v)) {
            Vec3 g = cache.hat_gradient(v, K);
            for (int e : cell_edges(m, K)) {
                int r = ridx.find(AtomKind::EdgeNNDelta, e);
                if (r < 0) continue;
                Vec3 ne = m.edge_normal_2d(e);
                mat.add(r, c, -Rational(m.outward_sign(e, K)) * dot(g, ne) / dot(ne, ne));
            }
        }
    }
    return mat;
}

/// rot: V1 -> V2 in 2D.  rot A_e = sum_x O(x,e) delta_x[n_e].
inline ExactMatrix assemble_rot_2d(const SimplicialComplex& m, bool bc) {
    if (m.dim() != 2) throw AssemblyError("assemble_rot_2d: 2D mesh required");
    SpaceBasis dom = build_space("V1", m, bc), ran = build_space("V2", m, bc);
    detail::AtomIndex ridx(ran);
    ExactMatrix mat(ran.dim(), dom.dim());
    for (int c = 0; c < dom.dim(); ++c) {
        int e = dom.atoms[static_cast<size_t>(c)].simplex;
        Vec3 ne = m.edge_normal_2d(e);
        for (int v : m.simplex(1, e)) {
            int sgn = m.orientation_sign(0, v, e, OrientationVariant::Standard);
            for (int axis = 0; axis < 2; ++axis) {
                int r = ridx.find(AtomKind::VertexVecDelta, v, axis);
                if (r >= 0) mat.add(r, c, Rational(sgn) * ne[static_cast<size_t>(axis)]);
            }
        }
    }
    return mat;
}

struct Hessian3dOps {
    ExactMatrix hess, curl, div;
};

inline Hessian3dOps assemble_hessian_3d(const SimplicialComplex& m, bool bc) {
    if (m.dim() != 3) throw AssemblyError("assemble_hessian_3d: 3D mesh required");
    SpaceBasis v0 = build_space("V0", m, bc), v1 = build_space("V1", m, bc);
    SpaceBasis v2 = build_space("V2", m, bc), v3 = build_space("V3", m, bc);
    detail::AtomIndex i1(v1), i2(v2), i3(v3);
    detail::CellCache cache(m);

    // hess: face atom gets -sum_K s_geo(f,K) (grad u|_K . n_f) / (2 |n_f|^2).
    ExactMatrix hess(v1.dim(), v0.dim());
    for (int c = 0; c < v0.dim(); ++c) {
        int v = v0.atoms[static_cast<size_t>(c)].simplex;
        for (int K : detail::star_cells(m, 0, v)) {
            Vec3 g = cache.hat_gradient(v, K);
            for (int f : cell_faces(m, K)) {
                int r = i1.find(AtomKind::FaceNNDelta, f);
                if (r < 0) continue;
                Vec3 nf = m.face_normal_3d(f);
                hess.add(r, c, -Rational(m.outward_sign(f, K)) * dot(g, nf) / (2 * dot(nf, nf)));
            }
        }
    }

    // curl: A_f spreads to the boundary edges of f; the Stokes sign of the
    // canonical edge tangent against n_f is -O(e,f); n_f is re-expressed in
    // the orthogonal payload pair (n_{e,+}, n_{e,-}).
    ExactMatrix curl(v2.dim(), v1.dim());
    for (int c = 0; c < v1.dim(); ++c) {
        int f = v1.atoms[static_cast<size_t>(c)].simplex;
        Vec3 nf = m.face_normal_3d(f);
        const auto& fv = m.simplex(2, f);
        for (size_t a = 0; a < fv.size(); ++a)
            for (size_t b = a + 1; b < fv.size(); ++b) {
                int e = m.simplex_id(1, {fv[a], fv[b]});
                int rho = -m.orientation_sign(1, e, f, OrientationVariant::Standard);
                auto [np, nm] = m.edge_normals_3d(e);
                Rational ap = dot(nf, np) / dot(np, np);
                Rational bm = dot(nf, nm) / dot(nm, nm);
                int rp = i2.find(AtomKind::EdgeNTDelta, e, 0);
                int rm = i2.find(AtomKind::EdgeNTDelta, e, 1);
                if (rp >= 0) curl.add(rp, c, 2 * rho * ap);
                if (rm >= 0) curl.add(rm, c, 2 * rho * bm);
            }
    }

    // div: B_{e,s} goes to the endpoint deltas with payload n_{e,s}.
    ExactMatrix div(v3.dim(), v2.dim());
    for (int c = 0; c < v2.dim(); ++c) {
        const auto& atom = v2.atoms[static_cast<size_t>(c)];
        auto [np, nm] = m.edge_normals_3d(atom.simplex);
        const Vec3& ns = atom.slot == 0 ? np : nm;
        for (int v : m.simplex(1, atom.simplex)) {
            int sgn = m.orientation_sign(0, v, atom.simplex, OrientationVariant::Standard);
            for (int axis = 0; axis < 3; ++axis) {
                int r = i3.find(AtomKind::VertexVecDelta, v, axis);
                if (r >= 0) div.add(r, c, Rational(sgn) * ns[static_cast<size_t>(axis)]);
            }
        }
    }
    return {hess, curl, div};
}

// ---------------------------------------------------------------------------
// divdiv complexes
// ---------------------------------------------------------------------------

struct Divdiv2dOps {
    ExactMatrix symcurl, divdiv;
};

inline Divdiv2dOps assemble_divdiv_2d(const SimplicialComplex& m, bool bc) {
    if (m.dim() != 2) throw AssemblyError("assemble_divdiv_2d: 2D mesh required");
    SpaceBasis u0 = build_space("U0", m, bc), u1 = build_space("U1", m, bc), u2 = build_space("U2", m, bc);
    detail::AtomIndex i1(u1), i2(u2);
    detail::CellCache cache(m);

    // symcurl on vector hats, expressed in the edge nn dofs (single-valued).
    ExactMatrix symcurl(u1.dim(), u0.dim());
    std::map<std::pair<int, int>, Rational> seen;
    for (int c = 0; c < u0.dim(); ++c) {
        const auto& atom = u0.atoms[static_cast<size_t>(c)];
        for (int K : detail::star_cells(m, 0, atom.simplex)) {
            const auto& s = m.simplex(2, K);
            const auto& lam = cache.barycentric(K);
            VecPoly u;
            for (size_t j = 0; j < s.size(); ++j)
                if (s[j] == atom.simplex) u[static_cast<size_t>(atom.slot)] = lam[j];
            MatPoly sc = sym(curl_rows2(u));
            for (int e : cell_edges(m, K)) {
                int r = i1.find(AtomKind::ReggeNN, e);
                if (r < 0) continue;
                Vec3 ne = m.edge_normal_2d(e);
                detail::set_single_valued(symcurl, r, c, bilinear(ne, sc, ne).eval(Vec3{0, 0, 0}), seen,
                                          "symcurl 2D");
            }
        }
    }

    // divdiv: for each cell in the support of the Regge atom, the tangential
    // endpoint terms -O(x,e) s_geo(e,f) (t_e . sigma|_f . n_e) / |n_e|^2.
    ExactMatrix divdiv(u2.dim(), u1.dim());
    for (int c = 0; c < u1.dim(); ++c) {
        int e0 = u1.atoms[static_cast<size_t>(c)].simplex;
        for (int K : detail::star_cells(m, 1, e0)) {
            auto edges = cell_edges(m, K);
            const auto& dual = cache.regge_dual(K);
            MatPoly sigma;
            for (size_t le = 0; le < edges.size(); ++le)
                if (edges[le] == e0) sigma = dual[le];
            auto rows = detail::const_rows(sigma);
            for (int e : edges) {
                Vec3 ne = m.edge_normal_2d(e);
                Vec3 te = m.edge_tangent(e);
                Rational tn = dot(te, detail::rows_times(rows, ne)) / dot(ne, ne);
                int sg = m.outward_sign(e, K);
                for (int v : m.simplex(1, e)) {
                    int r = i2.find(AtomKind::VertexScalarDelta, v);
                    if (r < 0) continue;
                    int o = m.orientation_sign(0, v, e, OrientationVariant::Standard);
                    divdiv.add(r, c, -Rational(o * sg) * tn);
                }
            }
        }
    }
    return {symcurl, divdiv};
}

struct Divdiv3dOps {
    ExactMatrix devgrad, symcurl, divdiv;
};

inline Divdiv3dOps assemble_divdiv_3d(const SimplicialComplex& m, bool bc, bool trimmed) {
    if (m.dim() != 3) throw AssemblyError("assemble_divdiv_3d: 3D mesh required");
    SpaceBasis u0 = build_space("U0", m, bc);
    SpaceBasis u1 = build_space(trimmed ? "U1hat" : "U1", m, bc);
    SpaceBasis u2 = build_space(trimmed ? "U2hat" : "U2", m, bc);
    SpaceBasis u3 = build_space("U3", m, bc);
    detail::AtomIndex i1(u1), i2(u2), i3(u3);
    detail::CellCache cache(m);
    Vec3 zero{0, 0, 0};

    // devgrad on vector hats, expressed in the edge nt dofs; the bubble dofs
    // vanish because devgrad of a piecewise-linear field has zero curl.
    ExactMatrix devgrad(u1.dim(), u0.dim());
    {
        std::map<std::pair<int, int>, Rational> seen;
        for (int c = 0; c < u0.dim(); ++c) {
            const auto& atom = u0.atoms[static_cast<size_t>(c)];
            for (int K : detail::star_cells(m, 0, atom.simplex)) {
                const auto& s = m.simplex(3, K);
                const auto& lam = cache.barycentric(K);
                VecPoly u;
                for (size_t j = 0; j < s.size(); ++j)
                    if (s[j] == atom.simplex) u[static_cast<size_t>(atom.slot)] = lam[j];
                MatPoly dg = deviatoric(grad_vec(u, 3), 3);
                auto rows = detail::const_rows(dg);
                for (int e : cell_edges(m, K)) {
                    auto [np, nm] = m.edge_normals_3d(e);
                    Vec3 te = m.edge_tangent(e);
                    for (int slot = 0; slot < 2; ++slot) {
                        int r = i1.find(AtomKind::MCSEdge, e, slot);
                        if (r < 0) continue;
                        const Vec3& ns = slot == 0 ? np : nm;
                        detail::set_single_valued(devgrad, r, c, dot(ns, detail::rows_times(rows, te)), seen,
                                                  "devgrad 3D");
                    }
                }
            }
        }
    }

    // symcurl, cellwise constant, expressed in the face nn and bubble dofs.
    ExactMatrix symcurl(u2.dim(), u1.dim());
    {
        std::map<std::pair<int, int>, Rational> seen;
        for (int c = 0; c < u1.dim(); ++c) {
            const auto& atom = u1.atoms[static_cast<size_t>(c)];
            std::vector<int> support;
            if (atom.kind == AtomKind::MCSEdge) support = detail::star_cells(m, 1, atom.simplex);
            else support = {atom.simplex};
            for (int K : support) {
                const auto& dual = cache.mcs_dual(K);
                MatPoly field;
                if (atom.kind == AtomKind::MCSEdge) {
                    auto edges = cell_edges(m, K);
                    for (size_t le = 0; le < edges.size(); ++le)
                        if (edges[le] == atom.simplex) field = dual.edge_fields[2 * le + static_cast<size_t>(atom.slot)];
                } else {
                    field = dual.bubble_fields[static_cast<size_t>(atom.slot)];
                }
                MatPoly sc = sym(curl_rows3(field));
                for (int f : cell_faces(m, K)) {
                    int r = i2.find(AtomKind::TDNNSFace, f);
                    if (r < 0) continue;
                    Vec3 nf = m.face_normal_3d(f);
                    detail::set_single_valued(symcurl, r, c, bilinear(nf, sc, nf).eval(zero), seen, "symcurl 3D");
                }
                const auto& bub = cache.bubble_basis(K);
                for (int slot = 0; slot < 2; ++slot) {
                    int r = i2.find(AtomKind::TDNNSBubble, K, slot);
                    if (r < 0) continue;
                    symcurl.add(r, c, Rational(1, 6) * const_frobenius(sc, bub[static_cast<size_t>(slot)]));
                }
            }
        }
    }

    // divdiv on the hat test functions: for each incident cell and face,
    // s_geo(f,K) / |n_f|^2 * integral over f of the tangential parts,
    // (n_f x sigma n_f) . (n_f x grad u) with constant integrand.
    ExactMatrix divdiv(u3.dim(), u2.dim());
    for (int c = 0; c < u2.dim(); ++c) {
        const auto& atom = u2.atoms[static_cast<size_t>(c)];
        std::vector<int> support;
        if (atom.kind == AtomKind::TDNNSFace) support = detail::star_cells(m, 2, atom.simplex);
        else support = {atom.simplex};
        for (int K : support) {
            const auto& dual = cache.tdnns_dual(K);
            MatPoly sigma;
            if (atom.kind == AtomKind::TDNNSFace) {
                auto faces = cell_faces(m, K);
                for (size_t lf = 0; lf < faces.size(); ++lf)
                    if (faces[lf] == atom.simplex) sigma = dual.face_fields[lf];
            } else {
                sigma = dual.bubble_fields[static_cast<size_t>(atom.slot)];
            }
            auto rows = detail::const_rows(sigma);
            for (int f : cell_faces(m, K)) {
                Vec3 nf = m.face_normal_3d(f);
                Vec3 tang = cross(nf, detail::rows_times(rows, nf));
                int sg = m.outward_sign(f, K);
                for (int v : m.simplex(3, K)) {
                    int r = i3.find(AtomKind::VertexScalarDelta, v);
                    if (r < 0) continue;
                    Vec3 g = cache.hat_gradient(v, K);
                    Rational val = Rational(sg) * dot(tang, cross(nf, g)) / (2 * dot(nf, nf));
                    if (val != 0) divdiv.add(r, c, val);
                }
            }
        }
    }
    return {devgrad, symcurl, divdiv};
}

// ---------------------------------------------------------------------------
// Auxiliary complexes and vertical maps
// ---------------------------------------------------------------------------

/// The auxiliary complex: the operators are literally the simplicial
/// boundary matrices with P1 coefficient blocks, because the distribution
/// payloads are indexed by the global monomials.
inline ComplexAssembly assemble_aux_complex(const SimplicialComplex& m, bool bc) {
    const int n = m.dim();
    OrientationVariant variant = bc ? OrientationVariant::Standard : OrientationVariant::Relative;
    ComplexAssembly out;
    out.kind = std::string("aux-hessian") + (bc ? "0" : "") + (n == 2 ? "-2d" : "-3d");
    out.bc = bc;
    for (int k = 0; k <= n; ++k) out.spaces.push_back(build_space("Vaux" + std::to_string(k), m, bc));
    static const char* names2[] = {"hess", "rot"};
    static const char* names3[] = {"hess", "curl", "div"};
    for (int k = 0; k < n; ++k) {
        out.ops.push_back(m.boundary_matrix(n - k, variant, n + 1));
        out.op_names.push_back(n == 2 ? names2[k] : names3[k]);
    }
    return out;
}

/// g^k: auxiliary atoms (tau, monomial) -> restricted P1 coordinates on tau,
/// i.e. the vertical maps onto the chain spaces with P1 coefficients.
inline std::vector<ExactMatrix> assemble_g_maps(const SimplicialComplex& m, bool bc) {
    const int n = m.dim();
    OrientationVariant variant = bc ? OrientationVariant::Standard : OrientationVariant::Relative;
    auto dims = tilde_dims(m, variant);
    std::vector<ExactMatrix> gs;
    for (int k = 0; k <= n; ++k) {
        int deg = n - k;
        int block = deg == n ? n + 1 : deg + 1;
        SpaceBasis aux = build_space("Vaux" + std::to_string(k), m, bc);
        ExactMatrix g(dims[static_cast<size_t>(deg)], aux.dim());
        for (int c = 0; c < aux.dim(); ++c) {
            const auto& atom = aux.atoms[static_cast<size_t>(c)];
            auto coords = p1_coordinates(m, deg, atom.simplex, aux_monomial(atom.slot));
            int base = m.position(deg, atom.simplex, variant) * block;
            for (size_t j = 0; j < coords.size(); ++j)
                if (coords[j] != 0) g.set(base + static_cast<int>(j), c, coords[j]);
        }
        gs.push_back(g);
    }
    return gs;
}

/// iota^k: V^k -> Vaux^k, realizing each atom of the main complex as a
/// first-order distribution with affine payload.
inline ExactMatrix assemble_iota(const SimplicialComplex& m, int k, bool bc) {
    const int n = m.dim();
    SpaceBasis dom = build_space("V" + std::to_string(k), m, bc);
    SpaceBasis ran = build_space("Vaux" + std::to_string(k), m, bc);
    detail::AtomIndex ridx(ran);
    ExactMatrix mat(ran.dim(), dom.dim());
    auto put_affine = [&](AtomKind kind, int simplex, const Rational& c0, const Vec3& lin, int col) {
        int r0 = ridx.find(kind, simplex, 0);
        if (r0 >= 0 && c0 != 0) mat.set(r0, col, c0);
        for (int i = 0; i < n; ++i) {
            int r = ridx.find(kind, simplex, i + 1);
            if (r >= 0 && lin[static_cast<size_t>(i)] != 0) mat.set(r, col, lin[static_cast<size_t>(i)]);
        }
    };
    for (int c = 0; c < dom.dim(); ++c) {
        const auto& atom = dom.atoms[static_cast<size_t>(c)];
        if (atom.kind == AtomKind::LagrangeHat) {
            // hat as an element of the broken P1 space: its coordinates on
            // every incident cell.
            for (int K : detail::star_cells(m, 0, atom.simplex)) {
                const auto& s = m.simplex(n, K);
                auto lam = m.cell_barycentric(K);
                for (size_t j = 0; j < s.size(); ++j)
                    if (s[j] == atom.simplex) {
                        Vec3 lin{0, 0, 0};
                        for (int i = 0; i < n; ++i) lin[static_cast<size_t>(i)] = lam[j].diff(i).eval(Vec3{0, 0, 0});
                        Vec3 origin{0, 0, 0};
                        put_affine(AtomKind::CellPoly, K, lam[j].eval(origin), lin, c);
                    }
            }
        } else if (atom.kind == AtomKind::EdgeNNDelta) {
            // A_e = v1_e[-n_e.(x - x1)]
            Vec3 ne = m.edge_normal_2d(atom.simplex);
            const Vec3& x1 = m.vertex(m.simplex(1, atom.simplex)[0]);
            put_affine(AtomKind::AuxEdgeDist, atom.simplex, dot(ne, x1), -Rational(1) * ne, c);
        } else if (atom.kind == AtomKind::FaceNNDelta) {
            // A_f = v1_f[2 n_f.(x - v0)]; opposite sign to the 2D edge case
            // because the geometric outward sign flips parity against the
            // combinatorial orientation in odd dimension
            Vec3 nf = m.face_normal_3d(atom.simplex);
            const Vec3& v0 = m.vertex(m.simplex(2, atom.simplex)[0]);
            put_affine(AtomKind::AuxFaceDist, atom.simplex, -2 * dot(nf, v0), Rational(2) * nf, c);
        } else if (atom.kind == AtomKind::EdgeNTDelta) {
            // B_{e,s} = v2_e[-n_{e,s}.(x - x1)]
            auto [np, nm] = m.edge_normals_3d(atom.simplex);
            const Vec3& ns = atom.slot == 0 ? np : nm;
            const Vec3& x1 = m.vertex(m.simplex(1, atom.simplex)[0]);
            put_affine(AtomKind::AuxEdgeDist, atom.simplex, dot(ns, x1), -Rational(1) * ns, c);
        } else if (atom.kind == AtomKind::VertexVecDelta) {
            // delta_x[e_a] = v^n_x[x_a - const]; the embedding carries an
            // extra minus so that the squares against the pure boundary
            // matrices of the auxiliary complex commute
            Vec3 lin{0, 0, 0};
            lin[static_cast<size_t>(atom.slot)] = -1;
            put_affine(AtomKind::AuxVertexDist, atom.simplex,
                       m.vertex(atom.simplex)[static_cast<size_t>(atom.slot)], lin, c);
        } else {
            throw AssemblyError("assemble_iota: unsupported atom kind");
        }
    }
    return mat;
}

// ---------------------------------------------------------------------------
// Duality pairings
// ---------------------------------------------------------------------------

namespace detail {

/// The matrix field of a divdiv-family basis atom restricted to one cell
/// (zero if the atom's carrier simplex does not touch the cell).
inline MatPoly field_atom_on_cell(CellCache& cache, const BasisAtom& ua, int K) {
    const SimplicialComplex& m = cache.m;
    if (ua.kind == AtomKind::ReggeNN) {
        auto edges = cell_edges(m, K);
        for (size_t le = 0; le < edges.size(); ++le)
            if (edges[le] == ua.simplex) return cache.regge_dual(K)[le];
        return MatPoly{};
    }
    if (ua.kind == AtomKind::TDNNSFace) {
        auto faces = cell_faces(m, K);
        for (size_t lf = 0; lf < faces.size(); ++lf)
            if (faces[lf] == ua.simplex) return cache.tdnns_dual(K).face_fields[lf];
        return MatPoly{};
    }
    if (ua.kind == AtomKind::TDNNSBubble)
        return ua.simplex == K ? cache.tdnns_dual(K).bubble_fields[static_cast<size_t>(ua.slot)] : MatPoly{};
    if (ua.kind == AtomKind::MCSEdge) {
        auto edges = cell_edges(m, K);
        for (size_t le = 0; le < edges.size(); ++le)
            if (edges[le] == ua.simplex) return cache.mcs_dual(K).edge_fields[2 * le + static_cast<size_t>(ua.slot)];
        return MatPoly{};
    }
    if (ua.kind == AtomKind::MCSBubble)
        return ua.simplex == K ? cache.mcs_dual(K).bubble_fields[static_cast<size_t>(ua.slot)] : MatPoly{};
    throw AssemblyError("field_atom_on_cell: unsupported field atom");
}

} // namespace detail

/**
 * Pairing matrix between a BC space of the Hessian family (distributions)
 * and a plain space of the divdiv family (fields): rows V atoms, columns U
 * atoms, each entry the action of the distribution on the piecewise field
 * (asserted single-valued where it crosses cells).
 */
inline ExactMatrix assemble_pairing(const SimplicialComplex& m, const SpaceBasis& V, const SpaceBasis& U) {
    if (!V.bc || U.bc || V.dim() != U.dim())
        throw AssemblyError("assemble_pairing: unsanctioned pair " + V.space_id + " x " + U.space_id);
    detail::CellCache cache(m);
    ExactMatrix mat(V.dim(), U.dim());
    Vec3 zero{0, 0, 0};

    auto u_field_on = [&](const BasisAtom& ua, int K) { return detail::field_atom_on_cell(cache, ua, K); };

    for (int r = 0; r < V.dim(); ++r) {
        const auto& va = V.atoms[static_cast<size_t>(r)];
        for (int c = 0; c < U.dim(); ++c) {
            const auto& ua = U.atoms[static_cast<size_t>(c)];
            Rational val(0);
            if (va.kind == AtomKind::LagrangeHat && ua.kind == AtomKind::VertexScalarDelta) {
                val = va.simplex == ua.simplex ? Rational(1) : Rational(0);
            } else if (va.kind == AtomKind::VertexVecDelta && ua.kind == AtomKind::VecLagrangeHat) {
                val = (va.simplex == ua.simplex && va.slot == ua.slot) ? Rational(1) : Rational(0);
            } else if ((va.kind == AtomKind::EdgeNNDelta && ua.kind == AtomKind::ReggeNN) ||
                       (va.kind == AtomKind::FaceNNDelta &&
                        (ua.kind == AtomKind::TDNNSFace || ua.kind == AtomKind::TDNNSBubble)) ||
                       (va.kind == AtomKind::EdgeNTDelta &&
                        (ua.kind == AtomKind::MCSEdge || ua.kind == AtomKind::MCSBubble))) {
                // evaluate the delta's moment on every cell incident to its
                // carrier simplex and assert single-valuedness
                int vk = va.kind == AtomKind::FaceNNDelta ? 2 : 1;
                bool first = true;
                for (int K : detail::star_cells(m, vk, va.simplex)) {
                    MatPoly field = u_field_on(ua, K);
                    Rational cand;
                    if (va.kind == AtomKind::EdgeNNDelta) {
                        Vec3 ne = m.edge_normal_2d(va.simplex);
                        cand = bilinear(ne, field, ne).eval(zero);
                    } else if (va.kind == AtomKind::FaceNNDelta) {
                        Vec3 nf = m.face_normal_3d(va.simplex);
                        cand = bilinear(nf, field, nf).eval(zero);
                    } else {
                        // MCS fields are linear; integrate over the edge
                        cand = edge_nt_moment(m, va.simplex, va.slot, field);
                    }
                    if (first) {
                        val = cand;
                        first = false;
                    } else if (val != cand) {
                        throw AssemblyError("assemble_pairing: moment not single-valued");
                    }
                }
            } else {
                throw AssemblyError("assemble_pairing: unsanctioned atom pair");
            }
            if (val != 0) mat.set(r, c, val);
        }
    }
    return mat;
}

// ---------------------------------------------------------------------------
// Top-level dispatcher
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& complex_kinds() {
    static const std::vector<std::string> kinds = {
        "hessian-2d",     "hessian0-2d",     "divdiv-2d",         "divdiv0-2d",
        "hessian-3d",     "hessian0-3d",     "divdiv-3d",         "divdiv0-3d",
        "aux-hessian-2d", "aux-hessian0-2d", "aux-hessian-3d",    "aux-hessian0-3d",
        "trimmed-divdiv-3d", "trimmed-divdiv0-3d"};
    return kinds;
}

/// Assemble a whole complex by kind id (see complex_kinds()).
inline ComplexAssembly assemble_complex(const std::string& kind, const SimplicialComplex& m) {
    const int n = m.dim();
    bool bc = kind_has_bc(kind);
    std::string suffix = "-" + std::to_string(n) + "d";
    if (kind.size() < suffix.size() || kind.substr(kind.size() - suffix.size()) != suffix)
        throw AssemblyError("complex kind " + kind + " does not match a " + std::to_string(n) + "D mesh");
    std::string family = kind.substr(0, kind.size() - suffix.size());
    if (bc) family.pop_back(); // drop the trailing '0'

    ComplexAssembly out;
    out.kind = kind;
    out.bc = bc;
    if (family == "aux-hessian") return assemble_aux_complex(m, bc);
    if (family == "hessian") {
        for (int k = 0; k <= n; ++k) out.spaces.push_back(build_space("V" + std::to_string(k), m, bc));
        if (n == 2) {
            out.ops = {assemble_hess_2d(m, bc), assemble_rot_2d(m, bc)};
            out.op_names = {"hess", "rot"};
        } else {
            auto ops = assemble_hessian_3d(m, bc);
            out.ops = {ops.hess, ops.curl, ops.div};
            out.op_names = {"hess", "curl", "div"};
        }
    } else if (family == "divdiv" || family == "trimmed-divdiv") {
        bool trimmed = family == "trimmed-divdiv";
        if (trimmed && n != 3) throw AssemblyError("trimmed divdiv complexes are 3D only");
        if (n == 2) {
            out.spaces = {build_space("U0", m, bc), build_space("U1", m, bc), build_space("U2", m, bc)};
            auto ops = assemble_divdiv_2d(m, bc);
            out.ops = {ops.symcurl, ops.divdiv};
            out.op_names = {"symcurl", "divdiv"};
        } else {
            out.spaces = {build_space("U0", m, bc), build_space(trimmed ? "U1hat" : "U1", m, bc),
                          build_space(trimmed ? "U2hat" : "U2", m, bc), build_space("U3", m, bc)};
            auto ops = assemble_divdiv_3d(m, bc, trimmed);
            out.ops = {ops.devgrad, ops.symcurl, ops.divdiv};
            out.op_names = {"devgrad", "symcurl", "divdiv"};
        }
    } else {
        throw AssemblyError("unknown complex kind: " + kind);
    }
    for (size_t k = 0; k < out.ops.size(); ++k) {
        if (out.ops[k].rows() != out.spaces[k + 1].dim() || out.ops[k].cols() != out.spaces[k].dim())
            throw AssemblyError("assembled operator has inconsistent shape");
    }
    return out;
}

} // namespace bgg

#endif // BGG_OPERATORS_HPP
