#pragma once

#include <cstdint>
#include <vector>

#include "graphkam/grid.hpp"
#include "graphkam/lagrangian.hpp"

namespace graphkam {

enum class StateClass : uint8_t {
    Differentiable,
    ConcaveKink,  // left slope > right slope
    ConvexKink,   // left slope < right slope
    Vertex,
};

struct SlopeProfile {
    const Grid* grid = nullptr;
    // Interior states: one-sided difference quotients along the edge
    // orientation. Vertex entries hold NaN here.
    std::vector<double> p_minus, p_plus;
    // Per vertex (graph order), outward slopes aligned with incident()
    // order. Edges with a single cell use the far endpoint value.
    std::vector<std::vector<double>> vertex_outward;
    double max_abs_slope = 0.0;  // Lipschitz bound over all of the above
};

SlopeProfile one_sided_slopes(const std::vector<double>& u, const Grid& grid);

// Classification threshold between "numerically differentiable" and a
// genuine kink: smooth solutions move one-sided slopes apart by about
// |u''| dx, kinks by O(1). 8 dx separates the two for the potentials here.
double default_slope_tol(const Grid& grid);

struct ViscosityReport {
    std::vector<StateClass> classes;     // per state
    std::vector<double> sub_violation;   // per state, >= 0
    std::vector<double> super_violation;
    double sub_residual = 0.0;  // max of sub_violation
    double super_residual = 0.0;
    StateId worst_sub = kNoState;
    StateId worst_super = kNoState;
    uint32_t count_differentiable = 0, count_concave = 0, count_convex = 0,
             count_vertex = 0;
    double tol = 0.0, slope_tol = 0.0;
    bool pass = false;  // both residuals <= tol
};

// Certify u as an approximate viscosity solution of H(x, Du) = c.
// Interior differentiable states test |H(x, pbar) - c|; concave kinks test
// H <= c over the touching-from-above slope bracket (9 samples, convex H
// peaks at an endpoint); convex kinks test H >= c over their bracket (min
// lands inside, 9 samples find it); vertices test the eikonal value
// max_j H_j(|d_j|) against c from both sides. Requires a Lagrangian
// symmetric at the vertices; throws std::invalid_argument otherwise.
ViscosityReport check_stationary(const std::vector<double>& u,
                                 const GraphLagrangian& gl, const Grid& grid,
                                 double c, double tol, double slope_tol);

// Residual of u_t + H(x, Du) = 0 across >= 3 evolution frames spaced
// frame_dt apart: centered u_t on each middle frame, then the stationary
// rules at level -u_t(x). States holding the sentinel in any of the three
// frames are skipped. Classes/counts describe the central middle frame.
ViscosityReport check_time_dependent(
    const std::vector<std::vector<double>>& frames, double frame_dt,
    const GraphLagrangian& gl, const Grid& grid, double tol, double slope_tol);

struct ComparisonResult {
    bool pass = false;
    double max_violation = 0.0;  // max over frames/states of u - v
    uint32_t worst_frame = 0;
    StateId worst_state = kNoState;
};

// Empirical comparison principle: u(., k) <= v(., k) + tol for every frame,
// given ordered initial frames. Throws std::invalid_argument when the
// initial frames are not ordered or shapes differ.
ComparisonResult comparison_probe(
    const std::vector<std::vector<double>>& u_frames,
    const std::vector<std::vector<double>>& v_frames, double tol);

}  // namespace graphkam
