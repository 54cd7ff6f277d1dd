#pragma once

#include <cstdint>
#include <vector>

#include "graphkam/grid.hpp"
#include "graphkam/lagrangian.hpp"

namespace graphkam {

// One-step move digraph: from every state, arcs to every state within
// graph distance vmax*dt (shortest-geodesic moves at constant speed over
// one time step), plus the zero-displacement self-arc. Arcs are stored
// CSR-style grouped by target with sources ascending, which both the
// evolution kernels and Bellman-Ford consume.
struct TransitionGraph {
    const Grid* grid = nullptr;
    const GraphLagrangian* lagrangian = nullptr;
    double dt = 0.0;
    double vmax = 0.0;

    std::vector<uint32_t> in_offsets;  // state_count + 1
    std::vector<StateId> in_from;
    std::vector<double> in_weight;
    std::vector<double> in_dist;  // unsigned move length

    size_t arc_count() const { return in_from.size(); }
    // Weight of the arc from -> to; sentinel (+inf) if absent.
    double weight_between(StateId from, StateId to) const;
};

// Action of the constant-speed move x -> y taking time dt: the geodesic is
// split at vertex crossings and integrated by composite midpoint on
// sub-pieces no longer than the local dx (exact for constant and linear
// potentials, O(dx^2) otherwise). d(x,y) == 0 gives the rest cost
// dt * L(x, 0).
double one_step_cost(const MetricGraph& g, const GraphLagrangian& gl,
                     const Grid& grid, GraphPoint x, GraphPoint y, double dt);

// Throws std::invalid_argument when vmax*dt cannot reach the nearest
// neighbor (vmax*dt < min dx).
TransitionGraph build_transitions(const Grid& grid, const GraphLagrangian& gl,
                                  double dt, double vmax);

// Serial reference for the builder above; identical output, no OpenMP.
TransitionGraph build_transitions_serial(const Grid& grid,
                                         const GraphLagrangian& gl, double dt,
                                         double vmax);

}  // namespace graphkam
