#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "desk.hpp"
#include "graphkam/transition.hpp"
#include "oracles.hpp"

using namespace graphkam;

TEST_CASE("grid state counting", "[grid]") {
    auto single = desk::make_graph(desk::kSingleEdge, 0.5);
    CHECK(single->grid.state_count == 3);  // a, b, midpoint
    CHECK(single->grid.edges[0].cells == 2);

    const char* triangle =
        "vertex a\nvertex b\nvertex c\n"
        "edge ab a b length=1\n"
        "edge bc b c length=1\n"
        "edge ca c a length=1\n";
    auto tri = desk::make_graph(triangle, 0.25);
    CHECK(tri->grid.state_count == 3 + 3 * 3);

    // node ids resolve edge ends to vertex states
    const Grid& g = tri->grid;
    uint32_t ab = tri->graph().edge_index("ab");
    CHECK(g.node(ab, 0) == g.vertex_state[tri->graph().edge(ab).v0]);
    CHECK(g.node(ab, 4) == g.vertex_state[tri->graph().edge(ab).v1]);
    CHECK(g.point_of(g.node(ab, 2)).s == Catch::Approx(0.5).margin(1e-15));

    // state_near snaps to the closest node, ties toward smaller offset
    CHECK(g.state_near({ab, 0.3}) == g.node(ab, 1));
    CHECK(g.state_near({ab, 0.95}) == g.node(ab, 4));
}

TEST_CASE("transition counts on small systems", "[transition]") {
    const char* triangle =
        "vertex a\nvertex b\nvertex c\n"
        "edge ab a b length=1\n"
        "edge bc b c length=1\n"
        "edge ca c a length=1\n";
    auto tri = desk::make(triangle, 0.25, 0.25, 1.0);
    // reach is exactly one cell: self plus two neighbors everywhere
    CHECK(tri->grid.state_count == 12);
    CHECK(tri->tg.arc_count() == 36);

    const char* loop =
        "vertex b\n"
        "edge loop b b length=2\n";
    auto lp = desk::make(loop, 0.5, 0.5, 1.0);
    CHECK(lp->grid.state_count == 4);
    CHECK(lp->tg.arc_count() == 12);
}

TEST_CASE("one step cost closed forms", "[transition]") {
    auto s = desk::make_graph(desk::kTwinBump, 1.0 / 64);
    const MetricGraph& g = s->graph();
    const GraphLagrangian& gl = s->gl();
    uint32_t e1 = g.edge_index("e1"), e2 = g.edge_index("e2");

    // resting pays dt * L(x, 0) = -dt * U(x)
    CHECK(one_step_cost(g, gl, s->grid, {e2, 0.5}, {e2, 0.5}, 0.25) ==
          Catch::Approx(-0.25).margin(1e-15));
    CHECK(one_step_cost(g, gl, s->grid, {e1, 0.25}, {e1, 0.25}, 0.25) == 0.0);

    // free edge: kinetic cost d^2 / (2 dt)
    double d = 0.25;
    CHECK(one_step_cost(g, gl, s->grid, {e1, 0.5}, {e1, 0.5 + d}, 0.5) ==
          Catch::Approx(d * d / (2 * 0.5)).margin(1e-12));

    // linear potential: the midpoint rule integrates it exactly, and on
    // this particular move the kinetic and potential parts cancel
    const char* ramp =
        "vertex a\nvertex b\n"
        "edge e a b length=1 potential=poly:0,1\n";
    ParsedSystem ramp_sys = parse_spec(ramp);
    REQUIRE(ramp_sys.ok());  // both vertices have one edge, nothing to match
    Grid rg = build_grid(*ramp_sys.graph, 1.0 / 64);
    double cost = one_step_cost(*ramp_sys.graph, ramp_sys.lagrangian, rg,
                                {0, 0.25}, {0, 0.75}, 0.5);
    CHECK(std::fabs(cost) <= 1e-14);

    // curved potential: composite midpoint lands within O(dx^2) of Simpson
    double bump_cost =
        one_step_cost(g, gl, s->grid, {e2, 0.25}, {e2, 0.75}, 0.5);
    double fine = oracle::fine_action(
        gl, {e2, 0.25}, g.geodesic_segments({e2, 0.25}, {e2, 0.75}), 0.5);
    CHECK(std::fabs(bump_cost - fine) <= 1e-4);
}

TEST_CASE("vertex-crossing moves agree with fine quadrature", "[transition]") {
    auto s = desk::make_graph(desk::kTwinBump, 1.0 / 64);
    const MetricGraph& g = s->graph();
    uint32_t e1 = g.edge_index("e1"), e2 = g.edge_index("e2");
    GraphPoint x{e1, 0.9}, y{e2, 0.9};  // crosses vertex b
    double dt = 0.25;
    double cost = one_step_cost(g, s->gl(), s->grid, x, y, dt);
    double fine = oracle::fine_action(s->gl(), x, g.geodesic_segments(x, y), dt);
    CHECK(std::fabs(cost - fine) <= 1e-4);
}

TEST_CASE("arc weights are symmetric and bounded below", "[transition]") {
    auto s = desk::make(desk::kTwinBump, 1.0 / 16, 0.25, 2.0);
    const TransitionGraph& tg = s->tg;
    double umax = 0.0;
    for (StateId x = 0; x < s->grid.state_count; ++x) {
        GraphPoint p = s->grid.point_of(x);
        umax = std::max(umax, s->gl().potential_at(p.edge, p.s));
    }
    for (StateId y = 0; y < s->grid.state_count; ++y) {
        for (uint32_t k = tg.in_offsets[y]; k < tg.in_offsets[y + 1]; ++k) {
            StateId x = tg.in_from[k];
            // same path run backwards costs the same
            CHECK(std::fabs(tg.in_weight[k] - tg.weight_between(y, x)) <= 1e-12);
            CHECK(tg.in_weight[k] >= -tg.dt * umax - 1e-12);
        }
        // sources come sorted, which the kernels rely on for tie-breaks
        for (uint32_t k = tg.in_offsets[y] + 1; k < tg.in_offsets[y + 1]; ++k)
            CHECK(tg.in_from[k - 1] < tg.in_from[k]);
    }
}

TEST_CASE("parallel and serial transition builds are identical",
          "[transition]") {
    auto s = desk::make_graph(desk::kTwinBump, 1.0 / 32);
    TransitionGraph a = build_transitions(s->grid, s->gl(), 0.25, 2.0);
    TransitionGraph b = build_transitions_serial(s->grid, s->gl(), 0.25, 2.0);
    REQUIRE(a.in_from == b.in_from);
    REQUIRE(a.in_offsets == b.in_offsets);
    REQUIRE(std::memcmp(a.in_weight.data(), b.in_weight.data(),
                        a.in_weight.size() * sizeof(double)) == 0);
    REQUIRE(std::memcmp(a.in_dist.data(), b.in_dist.data(),
                        a.in_dist.size() * sizeof(double)) == 0);
}

TEST_CASE("unreachable neighbors are rejected", "[transition]") {
    auto s = desk::make_graph(desk::kSingleEdge, 1.0 / 64);
    CHECK_THROWS_AS(build_transitions(s->grid, s->gl(), 0.001, 1.0),
                    std::invalid_argument);
}
