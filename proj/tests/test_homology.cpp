#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "bgg/homology.hpp"
#include "snf.hpp"

using namespace bgg;

namespace {

SimplicialComplex from_text(const std::string& text) {
    std::istringstream in(text);
    return load_mesh_stream(in);
}

SimplicialComplex single_triangle() {
    return from_text("dim 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 2\n");
}

} // namespace

TEST_CASE("homology of hand-checked domains") {
    auto tri = single_triangle();
    REQUIRE(homology_dims(tri, OrientationVariant::Standard) == BettiVector{1, 0, 0});
    REQUIRE(homology_dims(tri, OrientationVariant::Relative) == BettiVector{0, 0, 1});

    auto hole = generate_mesh("square-with-hole", 4);
    REQUIRE(homology_dims(hole, OrientationVariant::Standard) == BettiVector{1, 1, 0});
    REQUIRE(homology_dims(hole, OrientationVariant::Relative) == BettiVector{0, 1, 1});

    auto cube = generate_mesh("cube", 1);
    REQUIRE(homology_dims(cube, OrientationVariant::Standard) == BettiVector{1, 0, 0, 0});
    REQUIRE(homology_dims(cube, OrientationVariant::Relative) == BettiVector{0, 0, 0, 1});

    auto tunnel = generate_mesh("cube-with-tunnel", 3);
    REQUIRE(homology_dims(tunnel, OrientationVariant::Standard) == BettiVector{1, 1, 0, 0});

    auto cavity = generate_mesh("cube-with-cavity", 3);
    REQUIRE(homology_dims(cavity, OrientationVariant::Standard) == BettiVector{1, 0, 1, 0});
}

TEST_CASE("Lefschetz duality on suite meshes") {
    std::vector<SimplicialComplex> meshes;
    meshes.push_back(single_triangle());
    meshes.push_back(generate_mesh("criss-cross-square", 2));
    meshes.push_back(generate_mesh("square-with-hole", 3));
    meshes.push_back(generate_mesh("cube", 1));
    meshes.push_back(generate_mesh("cube-with-tunnel", 3));
    meshes.push_back(generate_mesh("cube-with-cavity", 3));
    for (const auto& m : meshes) {
        auto rel = homology_dims(m, OrientationVariant::Relative);
        auto std_ = homology_dims(m, OrientationVariant::Standard);
        for (int k = 0; k <= m.dim(); ++k) REQUIRE(rel[k] == std_[m.dim() - k]);
    }
}

TEST_CASE("rank agrees with the Smith-normal-form oracle") {
    for (const char* kind : {"criss-cross-square", "square-with-hole"}) {
        auto m = generate_mesh(kind, 3);
        for (auto v : {OrientationVariant::Relative, OrientationVariant::Standard})
            for (int k = 1; k <= m.dim(); ++k) {
                ExactMatrix b = m.boundary_matrix(k, v);
                REQUIRE(b.rank() == bgg_tests::snf_rank(b));
            }
    }
    auto cube = generate_mesh("cube", 2);
    for (int k = 1; k <= 3; ++k) {
        ExactMatrix b = cube.boundary_matrix(k, OrientationVariant::Relative);
        REQUIRE(b.rank() == bgg_tests::snf_rank(b));
    }
}

TEST_CASE("universal coefficients: block-tensored boundary has tensored betti") {
    auto m = generate_mesh("square-with-hole", 3);
    for (auto v : {OrientationVariant::Relative, OrientationVariant::Standard})
        for (int k = 1; k <= 2; ++k)
            REQUIRE(m.boundary_matrix(k, v, 3).rank() == 3 * m.boundary_matrix(k, v).rank());
}

TEST_CASE("expected cohomology tables") {
    auto tri = single_triangle();
    REQUIRE(expected_cohomology("hessian-2d", tri) == std::vector<int>{3, 0, 0});
    REQUIRE(expected_cohomology("divdiv-2d", tri) == std::vector<int>{3, 0, 0});
    REQUIRE(expected_cohomology("hessian0-2d", tri) == std::vector<int>{0, 0, 3});

    auto hole = generate_mesh("square-with-hole", 4);
    REQUIRE(expected_cohomology("hessian-2d", hole) == std::vector<int>{3, 3, 0});
    REQUIRE(expected_cohomology("divdiv0-2d", hole) == std::vector<int>{0, 3, 3});

    auto cube = generate_mesh("cube", 1);
    REQUIRE(expected_cohomology("hessian-3d", cube) == std::vector<int>{4, 0, 0, 0});
    REQUIRE(expected_cohomology("divdiv0-3d", cube) == std::vector<int>{0, 0, 0, 4});

    auto cavity = generate_mesh("cube-with-cavity", 3);
    REQUIRE(expected_cohomology("divdiv-3d", cavity) == std::vector<int>{4, 0, 4, 0});
    REQUIRE(expected_cohomology("aux-hessian-3d", cavity) == expected_cohomology("hessian-3d", cavity));
    REQUIRE(expected_cohomology("trimmed-divdiv-3d", cavity) == expected_cohomology("divdiv-3d", cavity));

    REQUIRE_THROWS_AS(expected_cohomology("nonsense-2d", tri), std::invalid_argument);
    REQUIRE_THROWS_AS(expected_cohomology("hessian-3d", tri), std::invalid_argument);
}

TEST_CASE("tilde boundary complex") {
    std::vector<SimplicialComplex> meshes;
    meshes.push_back(single_triangle());
    meshes.push_back(generate_mesh("criss-cross-square", 1));
    meshes.push_back(generate_mesh("square-with-hole", 3));
    meshes.push_back(generate_mesh("cube", 1));
    for (const auto& m : meshes) {
        for (auto v : {OrientationVariant::Relative, OrientationVariant::Standard}) {
            // d-tilde o d-tilde = 0 exactly.
            for (int k = 2; k <= m.dim(); ++k)
                REQUIRE(tilde_boundary_matrix(m, k - 1, v).compose(tilde_boundary_matrix(m, k, v)).is_zero());
            auto dims = tilde_dims(m, v);
            for (int k = 0; k <= m.dim(); ++k) {
                int expect = m.eligible_count(k, v) * ((k == m.dim()) ? m.dim() + 1 : k + 1);
                REQUIRE(dims[k] == expect);
            }
            // Cohomology concentrates in degree zero with the dimension of
            // the matching Lagrange space.
            auto h = tilde_cohomology_dims(m, v);
            int lagrange = v == OrientationVariant::Relative ? m.count(0) : m.interior_count(0);
            REQUIRE(h[0] == lagrange);
            for (int j = 1; j <= m.dim(); ++j) REQUIRE(h[j] == 0);
        }
    }
}

TEST_CASE("vertex patch split") {
    auto m = generate_mesh("criss-cross-square", 1);
    for (auto v : {OrientationVariant::Relative, OrientationVariant::Standard}) {
        auto patches = vertex_patch_split(m, v);
        REQUIRE(static_cast<int>(patches.size()) == m.count(0));
        // Degreewise total dimension equals the tilde complex dimension.
        auto dims = tilde_dims(m, v);
        for (int k = 0; k <= m.dim(); ++k) {
            int total = 0;
            for (const auto& p : patches) total += p.dims[k];
            REQUIRE(total == dims[k]);
        }
        // Patch boundary maps compose to zero.
        for (const auto& p : patches)
            REQUIRE(p.boundary[1].compose(p.boundary[2]).is_zero());
        // Patch homology sums to the tilde cohomology, degree-reversed.
        auto h = tilde_cohomology_dims(m, v);
        std::vector<int> sum(m.dim() + 1, 0);
        for (const auto& p : patches) {
            auto ph = patch_homology_dims(p);
            for (int k = 0; k <= m.dim(); ++k) sum[m.dim() - k] += ph[k];
        }
        REQUIRE(sum == h);
    }
    // The center vertex patch (Relative) has homology 1 at the top chain
    // degree, generated by the hat function level.
    auto patches = vertex_patch_split(m, OrientationVariant::Relative);
    int center = -1;
    for (int v = 0; v < m.count(0); ++v)
        if (!m.is_boundary(0, v)) center = v;
    REQUIRE(center >= 0);
    auto ph = patch_homology_dims(patches[center]);
    REQUIRE(ph == std::vector<int>{0, 0, 1});
    // Boundary vertex, Standard variant: homology vanishes in all indices.
    auto std_patches = vertex_patch_split(m, OrientationVariant::Standard);
    int bnd = m.is_boundary(0, 0) ? 0 : 1;
    REQUIRE(patch_homology_dims(std_patches[bnd]) == std::vector<int>{0, 0, 0});
}
