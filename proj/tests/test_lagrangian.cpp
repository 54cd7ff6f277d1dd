#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "desk.hpp"
#include "graphkam/lagrangian.hpp"
#include "oracles.hpp"

using namespace graphkam;

TEST_CASE("polynomial eval and derivative", "[lagrangian]") {
    Polynomial p{{1.0, -2.0, 3.0}};  // 1 - 2t + 3t^2
    CHECK(p.eval(0.0) == 1.0);
    CHECK(p.eval(1.0) == 2.0);
    CHECK(p.eval(0.5) == Catch::Approx(0.75).margin(1e-15));
    CHECK(p.derivative(0.0) == -2.0);
    CHECK(p.derivative(1.0) == 4.0);
}

TEST_CASE("mechanical lagrangian closed forms", "[lagrangian]") {
    auto s = desk::make_graph(desk::kTwinBump, 0.5);
    const GraphLagrangian& gl = s->gl();
    uint32_t e2 = s->graph().edge_index("e2");

    // U(tau) = 4 tau - 4 tau^2 peaks at 1 on the unit edge
    CHECK(gl.potential_at(e2, 0.5) == Catch::Approx(1.0).margin(1e-15));
    CHECK(gl.potential_at(e2, 0.0) == 0.0);
    CHECK(lagrangian_eval(gl, e2, 0.5, 2.0) ==
          Catch::Approx(0.5 * 4.0 - 1.0).margin(1e-15));

    // dL/dv = kappa v, checked against central differences
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int it = 0; it < 50; ++it) {
        double v = unif(rng), x = 0.25 * (unif(rng) + 2.0);
        double h = 1e-6;
        double num = (lagrangian_eval(gl, e2, x, v + h) -
                      lagrangian_eval(gl, e2, x, v - h)) /
                     (2 * h);
        CHECK(std::fabs(lagrangian_velocity_gradient(gl, e2, x, v) - num) <=
              1e-7);
    }
}

TEST_CASE("hamiltonian is the legendre transform", "[lagrangian]") {
    auto s = desk::make_graph(desk::kTwinBump, 0.5);
    const GraphLagrangian& gl = s->gl();
    uint32_t e2 = s->graph().edge_index("e2");
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);

    for (int it = 0; it < 40; ++it) {
        double p = unif(rng);
        double x = 0.125 * (it % 8);
        auto hv = hamiltonian_eval(gl, e2, x, p, Cone::FullLine);
        // closed form p^2/(2 kappa) + U for kappa = 1
        double expected = 0.5 * p * p + gl.potential_at(e2, x);
        CHECK(std::fabs(hv.value - expected) <= 1e-9);
        // Fenchel: H(p) >= -p z - L(z) with equality at the maximizer
        for (double z : {-1.5, -0.25, 0.0, 0.8, 2.0})
            CHECK(hv.value >= -p * z - lagrangian_eval(gl, e2, x, z) - 1e-12);
        CHECK(std::fabs(hv.value -
                        (-p * hv.maximizer -
                         lagrangian_eval(gl, e2, x, hv.maximizer))) <= 1e-9);
        // independent check by golden-section search
        CHECK(std::fabs(hv.value -
                        oracle::golden_hamiltonian(gl, e2, x, p, Cone::FullLine)) <=
              1e-7);
    }
}

TEST_CASE("one-sided hamiltonian clamps the velocity cone", "[lagrangian]") {
    auto s = desk::make_graph(desk::kSingleEdge, 0.5);
    const GraphLagrangian& gl = s->gl();

    // at end 0 only z >= 0 is admissible; for p > 0 the best is z = 0
    auto hv = hamiltonian_eval(gl, 0, 0.0, 1.0, Cone::IncomingOrZero);
    CHECK(hv.value == Catch::Approx(0.0).margin(1e-12));
    CHECK(hv.maximizer == 0.0);
    // for p < 0 the unconstrained maximizer -p is already incoming
    hv = hamiltonian_eval(gl, 0, 0.0, -1.0, Cone::IncomingOrZero);
    CHECK(hv.value == Catch::Approx(0.5).margin(1e-12));
    CHECK(hv.maximizer == Catch::Approx(1.0).margin(1e-12));
    // symmetric situation at end 1
    hv = hamiltonian_eval(gl, 0, 1.0, -1.0, Cone::IncomingOrZero);
    CHECK(hv.value == Catch::Approx(0.0).margin(1e-12));
    hv = hamiltonian_eval(gl, 0, 1.0, 1.0, Cone::IncomingOrZero);
    CHECK(hv.value == Catch::Approx(0.5).margin(1e-12));

    for (double p : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
        double fast = hamiltonian_eval(gl, 0, 0.0, p, Cone::IncomingOrZero).value;
        double slow = oracle::golden_hamiltonian(gl, 0, 0.0, p, Cone::IncomingOrZero);
        CHECK(std::fabs(fast - slow) <= 1e-7);
    }
}

TEST_CASE("vertex compatibility mismatch is reported", "[lagrangian]") {
    const char* bad =
        "vertex a\nvertex b\n"
        "edge e1 a b length=1\n"
        "edge e2 a b length=1 potential=poly:1\n";
    ParsedSystem sys = parse_spec(bad);
    REQUIRE(!sys.ok());
    bool found = false;
    for (const auto& e : sys.errors)
        if (e.find("L mismatch at vertex a: 0 vs -1") != std::string::npos)
            found = true;
    CHECK(found);

    // the bump vanishes at both ends, so the twin system is compatible
    CHECK(parse_spec(desk::kTwinBump).ok());
}

TEST_CASE("vertex symmetry check", "[lagrangian]") {
    auto good = desk::make_graph(desk::kTwinBump, 0.5);
    CHECK(check_symmetric_at_vertices(good->gl()).symmetric);

    const char* uneven =
        "vertex a\nvertex b\n"
        "edge e1 a b length=1\n"
        "edge e2 a b length=1 kinetic=2\n";
    ParsedSystem sys = parse_spec(uneven);
    REQUIRE(sys.ok());
    SymmetryReport rep = check_symmetric_at_vertices(sys.lagrangian);
    CHECK(!rep.symmetric);
    CHECK(rep.max_deviation > 0.1);
    CHECK(!rep.detail.empty());
}
