#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "bgg/mesh.hpp"

using namespace bgg;

namespace {

SimplicialComplex from_text(const std::string& text) {
    std::istringstream in(text);
    return load_mesh_stream(in);
}

const char* kTwoTriangleSquare =
    "dim 2\n"
    "vertices 4\n"
    "0 0\n1 0\n1 1\n0 1\n"
    "cells 2\n"
    "0 1 2\n"
    "0 2 3\n";

int euler(const SimplicialComplex& m) {
    int chi = 0;
    for (int k = 0; k <= m.dim(); ++k) chi += (k % 2 ? -1 : 1) * m.count(k);
    return chi;
}

} // namespace

TEST_CASE("parsing accepts comments and rational coordinates") {
    auto m = from_text("# a comment\ndim 2\nvertices 3 # trailing\n0 0\n1/2 0\n0 2/3\ncells 1\n0 1 2\n");
    REQUIRE(m.dim() == 2);
    REQUIRE(m.vertex(1)[0] == Rational(1, 2));
    REQUIRE(m.vertex(2)[1] == Rational(2, 3));
    REQUIRE(m.count(2) == 1);
}

TEST_CASE("parse errors") {
    REQUIRE_THROWS_AS(from_text(""), ParseError);
    REQUIRE_THROWS_AS(from_text("dim 4\n"), ParseError);
    REQUIRE_THROWS_AS(from_text("vertices 3\n"), ParseError);
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 1\n0 0\ncells 1\n0 0 0\nextra\n"), ParseError);
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 1\n0 0.5\ncells 1\n0 0 0\n"), ParseError);
    REQUIRE_THROWS_AS(load_mesh("/nonexistent/mesh.txt"), ParseError);
}

TEST_CASE("topology errors") {
    // Vertex index out of range.
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 5\n"), TopologyError);
    // Repeated vertex in a cell.
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 1\n"), TopologyError);
    // Zero-volume cell.
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 3\n0 0\n1 1\n2 2\ncells 1\n0 1 2\n"), TopologyError);
    // Dangling vertex.
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 4\n0 0\n1 0\n0 1\n5 5\ncells 1\n0 1 2\n"), TopologyError);
    // Edge shared by three triangles.
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 5\n0 0\n1 0\n0 1\n1 1\n1 -1\n"
                                "cells 3\n0 1 2\n0 1 3\n0 1 4\n"),
                      TopologyError);
    // Disconnected.
    REQUIRE_THROWS_AS(from_text("dim 2\nvertices 6\n0 0\n1 0\n0 1\n5 5\n6 5\n5 6\n"
                                "cells 2\n0 1 2\n3 4 5\n"),
                      TopologyError);
}

TEST_CASE("closure and boundary classification on the two-triangle square") {
    auto m = from_text(kTwoTriangleSquare);
    REQUIRE(m.count(0) == 4);
    REQUIRE(m.count(1) == 5);
    REQUIRE(m.count(2) == 2);
    REQUIRE(m.interior_count(0) == 0);
    REQUIRE(m.interior_count(1) == 1); // the diagonal {0,2}
    REQUIRE(m.interior_count(2) == 2);
    int diag = m.simplex_id(1, {0, 2});
    REQUIRE(diag >= 0);
    REQUIRE_FALSE(m.is_boundary(1, diag));
    REQUIRE(m.is_boundary(0, 0));
    REQUIRE(m.cofaces(1, diag).size() == 2);

    // Relative boundary matrix of cells -> interior edges is 1x2 with
    // opposite unit entries.
    ExactMatrix b = m.boundary_matrix(2, OrientationVariant::Relative);
    REQUIRE(b.rows() == 1);
    REQUIRE(b.cols() == 2);
    Rational a = b.get(0, 0), c = b.get(0, 1);
    REQUIRE(((a == 1 && c == -1) || (a == -1 && c == 1)));
}

TEST_CASE("orientation sign convention") {
    auto m = from_text(kTwoTriangleSquare);
    int e01 = m.simplex_id(1, {0, 1});
    // O([x1], [x1,x2]) = +1, O([x2], [x1,x2]) = -1 in the Standard variant.
    REQUIRE(m.orientation_sign(0, m.simplex_id(0, {0}), e01, OrientationVariant::Standard) == 1);
    REQUIRE(m.orientation_sign(0, m.simplex_id(0, {1}), e01, OrientationVariant::Standard) == -1);
    // Non-incident pair gives 0.
    REQUIRE(m.orientation_sign(0, m.simplex_id(0, {2}), e01, OrientationVariant::Standard) == 0);
    // Relative variant vanishes on boundary simplices.
    REQUIRE(m.orientation_sign(0, m.simplex_id(0, {0}), e01, OrientationVariant::Relative) == 0);
}

TEST_CASE("boundary of boundary is zero") {
    for (const char* kind : {"criss-cross-square", "square-with-hole"}) {
        auto m = generate_mesh(kind, kind == std::string("square-with-hole") ? 3 : 2);
        for (auto v : {OrientationVariant::Relative, OrientationVariant::Standard})
            for (int k = 2; k <= m.dim(); ++k)
                REQUIRE(m.boundary_matrix(k - 1, v).compose(m.boundary_matrix(k, v)).is_zero());
    }
    auto cube = generate_mesh("cube", 1);
    for (auto v : {OrientationVariant::Relative, OrientationVariant::Standard})
        for (int k = 2; k <= 3; ++k)
            REQUIRE(cube.boundary_matrix(k - 1, v).compose(cube.boundary_matrix(k, v)).is_zero());
}

TEST_CASE("criss-cross square matches hand counts") {
    auto m = generate_mesh("criss-cross-square", 1);
    REQUIRE(m.count(0) == 5);
    REQUIRE(m.count(1) == 8);
    REQUIRE(m.count(2) == 4);
    REQUIRE(m.interior_count(0) == 1);
    REQUIRE(m.interior_count(1) == 4);
    ExactMatrix b = m.boundary_matrix(2, OrientationVariant::Relative);
    REQUIRE(b.rows() == 4);
    REQUIRE(b.cols() == 4);
    REQUIRE(b.rank() == 3);
}

TEST_CASE("cell vertex order in the input does not change anything") {
    auto m1 = from_text(kTwoTriangleSquare);
    auto m2 = from_text(
        "dim 2\nvertices 4\n0 0\n1 0\n1 1\n0 1\ncells 2\n2 0 1\n0 3 2\n");
    REQUIRE(m1.boundary_matrix(2, OrientationVariant::Standard) ==
            m2.boundary_matrix(2, OrientationVariant::Standard));
    REQUIRE(m1.boundary_matrix(1, OrientationVariant::Relative) ==
            m2.boundary_matrix(1, OrientationVariant::Relative));
    REQUIRE(m1.cell_sign(0) == m2.cell_sign(0));
}

TEST_CASE("boundary matrix with coefficient blocks") {
    auto m = from_text(kTwoTriangleSquare);
    ExactMatrix b1 = m.boundary_matrix(2, OrientationVariant::Relative, 1);
    ExactMatrix b3 = m.boundary_matrix(2, OrientationVariant::Relative, 3);
    REQUIRE(b3.rows() == 3 * b1.rows());
    REQUIRE(b3.cols() == 3 * b1.cols());
    for (int c = 0; c < 3; ++c) REQUIRE(b3.get(c, c) == b1.get(0, 0));
    REQUIRE(b3.get(0, 1) == 0);
}

TEST_CASE("geometry payloads") {
    auto m = from_text(kTwoTriangleSquare);
    int diag = m.simplex_id(1, {0, 2});
    REQUIRE(m.edge_tangent(diag) == vec3(1, 1));
    REQUIRE(m.edge_normal_2d(diag) == vec3(-1, 1));
    REQUIRE(dot(m.edge_normal_2d(diag), m.edge_tangent(diag)) == 0);
    // Outward signs from the two incident cells are opposite.
    auto cof = m.cofaces(1, diag);
    REQUIRE(m.outward_sign(diag, cof[0]) + m.outward_sign(diag, cof[1]) == 0);
    REQUIRE(m.centroid(2, 0) + m.centroid(2, 1) == vec3(1, 1));

    auto cube = generate_mesh("cube", 1);
    for (int e = 0; e < cube.count(1); ++e) {
        auto [np, nm] = cube.edge_normals_3d(e);
        Vec3 t = cube.edge_tangent(e);
        REQUIRE(dot(np, t) == 0);
        REQUIRE(dot(nm, t) == 0);
        REQUIRE(dot(np, nm) == 0);
        REQUIRE(cross(t, np) == nm);
    }
    for (int f = 0; f < cube.count(2); ++f) {
        Vec3 n = cube.face_normal_3d(f);
        const auto& fv = cube.simplex(2, f);
        REQUIRE(dot(n, cube.vertex(fv[1]) - cube.vertex(fv[0])) == 0);
        REQUIRE(dot(n, cube.vertex(fv[2]) - cube.vertex(fv[0])) == 0);
    }
}

TEST_CASE("barycentric coordinates") {
    auto m = generate_mesh("criss-cross-square", 1);
    for (int c = 0; c < m.count(2); ++c) {
        auto lam = m.cell_barycentric(c);
        const auto& s = m.simplex(2, c);
        Poly sum;
        for (const auto& l : lam) sum = sum + l;
        REQUIRE(sum == Poly(Rational(1)));
        for (size_t i = 0; i < lam.size(); ++i)
            for (size_t j = 0; j < s.size(); ++j)
                REQUIRE(lam[i].eval(m.vertex(s[j])) == Rational(i == j ? 1 : 0));
    }
}

TEST_CASE("generators: counts and Euler characteristics") {
    auto sq = generate_mesh("square", 2);
    REQUIRE(sq.count(0) == 9);
    REQUIRE(sq.count(2) == 8);
    REQUIRE(euler(sq) == 1);

    auto hole = generate_mesh("square-with-hole", 3);
    REQUIRE(hole.count(2) == 16);
    REQUIRE(euler(hole) == 0);

    auto cube = generate_mesh("cube", 1);
    REQUIRE(cube.count(0) == 8);
    REQUIRE(cube.count(3) == 6);
    REQUIRE(euler(cube) == 1);
    REQUIRE(euler(generate_mesh("cube", 2)) == 1);

    REQUIRE(euler(generate_mesh("cube-with-tunnel", 3)) == 0);
    REQUIRE(euler(generate_mesh("cube-with-cavity", 3)) == 2);
    REQUIRE(euler(generate_mesh("criss-cross-square", 2)) == 1);

    REQUIRE_THROWS_AS(generate_mesh("square-with-hole", 2), TopologyError);
    REQUIRE_THROWS_AS(generate_mesh("cube-with-tunnel", 2), TopologyError);
    REQUIRE_THROWS_AS(generate_mesh("nonsense", 2), TopologyError);
    REQUIRE_THROWS_AS(generate_mesh("square", 0), TopologyError);
}

TEST_CASE("text round trip") {
    auto m = generate_mesh("criss-cross-square", 2);
    auto m2 = from_text(mesh_to_text(m));
    REQUIRE(m2.count(0) == m.count(0));
    REQUIRE(m2.count(1) == m.count(1));
    REQUIRE(m2.count(2) == m.count(2));
    REQUIRE(m.boundary_matrix(2, OrientationVariant::Standard) ==
            m2.boundary_matrix(2, OrientationVariant::Standard));
}
