#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bgg/operators.hpp"
#include "bgg/verify.hpp"

using namespace bgg;

namespace {

SimplicialComplex single_triangle() {
    return SimplicialComplex(2, {vec3(0, 0), vec3(1, 0), vec3(0, 1)}, {{0, 1, 2}});
}

std::vector<std::pair<std::string, SimplicialComplex>> suite_2d() {
    std::vector<std::pair<std::string, SimplicialComplex>> meshes;
    meshes.emplace_back("triangle", single_triangle());
    meshes.emplace_back("square", generate_mesh("square", 1));
    meshes.emplace_back("criss-cross", generate_mesh("criss-cross-square", 1));
    meshes.emplace_back("hole", generate_mesh("square-with-hole", 4));
    return meshes;
}

const std::vector<std::string> kinds_2d = {"hessian-2d",     "hessian0-2d",     "divdiv-2d",
                                           "divdiv0-2d",     "aux-hessian-2d",  "aux-hessian0-2d"};

/// Conjugate every operator by positive diagonal basis rescalings.
ComplexAssembly rescaled(const ComplexAssembly& a, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(1, 9);
    std::vector<std::vector<Rational>> scales;
    for (const auto& s : a.spaces) {
        std::vector<Rational> d;
        for (int i = 0; i < s.dim(); ++i) d.push_back(Rational(num(rng), num(rng)));
        scales.push_back(d);
    }
    ComplexAssembly out = a;
    for (size_t k = 0; k < a.ops.size(); ++k) {
        ExactMatrix m(a.ops[k].rows(), a.ops[k].cols());
        for (int i = 0; i < m.rows(); ++i)
            for (const auto& [j, v] : a.ops[k].row(i))
                m.set(i, j, Rational(scales[k + 1][static_cast<size_t>(i)] * v / scales[k][static_cast<size_t>(j)]));
        out.ops[k] = m;
    }
    return out;
}

} // namespace

TEST_CASE("2D complexes: zero composites and expected cohomology") {
    for (const auto& [name, m] : suite_2d()) {
        for (const auto& kind : kinds_2d) {
            INFO(kind << " on " << name);
            ComplexAssembly a = assemble_complex(kind, m);
            REQUIRE(a.spaces.size() == 3);
            REQUIRE(a.ops.size() == 2);
            REQUIRE(a.ops[1].compose(a.ops[0]).is_zero());
            REQUIRE(cohomology_dims(a) == expected_cohomology(kind, m));
        }
    }
}

TEST_CASE("global affine functions span the Hessian kernel") {
    for (const auto& [name, m] : suite_2d()) {
        INFO(name);
        ComplexAssembly a = assemble_complex("hessian-2d", m);
        // u = 2 + 3x - 5y sampled at the vertices.
        ExactMatrix u(a.spaces[0].dim(), 1);
        for (int i = 0; i < a.spaces[0].dim(); ++i) {
            const Vec3& x = m.vertex(a.spaces[0].atoms[static_cast<size_t>(i)].simplex);
            u.set(i, 0, Rational(2) + Rational(3) * x[0] - Rational(5) * x[1]);
        }
        REQUIRE(a.ops[0].compose(u).is_zero());
        // On connected plain meshes the kernel is exactly the affines.
        REQUIRE(a.ops[0].kernel_dim() == 3);
    }
}

TEST_CASE("single triangle: hess has no rows, everything is cohomology") {
    SimplicialComplex m = single_triangle();
    ComplexAssembly a = assemble_complex("hessian-2d", m);
    REQUIRE(a.ops[0].rows() == 0);
    REQUIRE(a.ops[0].cols() == 3);
    REQUIRE(cohomology_dims(a) == std::vector<int>{3, 0, 0});
}

TEST_CASE("criss-cross square: rot is 2x4 of rank 2") {
    SimplicialComplex m = generate_mesh("criss-cross-square", 1);
    ComplexAssembly a = assemble_complex("hessian-2d", m);
    REQUIRE(a.ops[1].rows() == 2);
    REQUIRE(a.ops[1].cols() == 4);
    REQUIRE(a.ops[1].rank() == 2);
}

TEST_CASE("divdiv annihilates constant symmetric fields") {
    for (const auto& [name, m] : suite_2d()) {
        INFO(name);
        ComplexAssembly a = assemble_complex("divdiv-2d", m);
        // Global nn-dof coordinates of the constant identity field.
        ExactMatrix c(a.spaces[1].dim(), 1);
        for (int i = 0; i < a.spaces[1].dim(); ++i) {
            Vec3 ne = m.edge_normal_2d(a.spaces[1].atoms[static_cast<size_t>(i)].simplex);
            c.set(i, 0, dot(ne, ne));
        }
        REQUIRE(a.ops[1].compose(c).is_zero());
    }
}

TEST_CASE("2D iota, g and kappa squares commute with short exact columns") {
    for (const auto& [name, m] : suite_2d()) {
        for (bool bc : {false, true}) {
            INFO(name << " bc=" << bc);
            REQUIRE(check_diagram(m, bc));
        }
    }
}

TEST_CASE("2D duality: identity pairings, signed transposes, harmonic dims") {
    for (const auto& [name, m] : suite_2d()) {
        INFO(name);
        REQUIRE(check_duality(m));
    }
}

TEST_CASE("2D dual coincidences hold with their exact signs") {
    SimplicialComplex m = generate_mesh("criss-cross-square", 1);
    ExactMatrix P02 = assemble_pairing(m, build_space("V0", m, true), build_space("U2", m, false));
    ExactMatrix P11 = assemble_pairing(m, build_space("V1", m, true), build_space("U1", m, false));
    ExactMatrix P20 = assemble_pairing(m, build_space("V2", m, true), build_space("U0", m, false));
    ComplexAssembly hess0 = assemble_complex("hessian0-2d", m);
    ComplexAssembly dd = assemble_complex("divdiv-2d", m);
    ExactMatrix lhs1 = P02.compose(dd.ops[1]);
    ExactMatrix rhs1 = hess0.ops[0].transpose().compose(P11);
    REQUIRE(lhs1 == rhs1);
    REQUIRE_FALSE(lhs1 == rhs1.negated()); // the identity pins the sign
    ExactMatrix lhs2 = P11.compose(dd.ops[0]);
    ExactMatrix rhs2 = hess0.ops[1].transpose().compose(P20);
    REQUIRE(lhs2 == rhs2.negated());
    REQUIRE_FALSE(lhs2 == rhs2);
}

TEST_CASE("unsanctioned pairing is rejected") {
    SimplicialComplex m = generate_mesh("square", 1);
    REQUIRE_THROWS_AS(assemble_pairing(m, build_space("V0", m, false), build_space("U2", m, true)), AssemblyError);
    REQUIRE_THROWS_AS(assemble_pairing(m, build_space("V0", m, true), build_space("U2", m, true)), AssemblyError);
}

TEST_CASE("2D scaling invariance under positive diagonal rescaling") {
    std::mt19937 rng(17);
    SimplicialComplex m = generate_mesh("criss-cross-square", 1);
    for (const auto& kind : kinds_2d) {
        INFO(kind);
        ComplexAssembly a = assemble_complex(kind, m);
        ComplexAssembly b = rescaled(a, rng);
        REQUIRE(b.ops[1].compose(b.ops[0]).is_zero());
        for (size_t k = 0; k < a.ops.size(); ++k) REQUIRE(a.ops[k].rank() == b.ops[k].rank());
        REQUIRE(cohomology_dims(b) == expected_cohomology(kind, m));
    }
}
