#pragma once

// Slow reference computations the solver is tested against. Deliberately
// naive (path enumeration, golden-section search, fine quadrature) and
// independent of the solver internals. Frozen: a change here invalidates
// every tolerance downstream.

#include <vector>

#include "graphkam/lagrangian.hpp"
#include "graphkam/metric_graph.hpp"

namespace oracle {

using graphkam::Cone;
using graphkam::GraphLagrangian;
using graphkam::GraphPoint;
using graphkam::MetricGraph;
using graphkam::PathSegment;

// Shortest distance by exhaustive enumeration of edge sequences with at
// most max_edges edges. Exact on graphs where no shortest path crosses
// more edges than that.
double brute_distance(const MetricGraph& g, GraphPoint x, GraphPoint y,
                      int max_edges = 3);

// sup over admissible z of (-p z - L(edge, s, z)) by golden-section search
// on a generous bracket. Accurate to ~1e-10 for the mechanical family.
double golden_hamiltonian(const GraphLagrangian& gl, uint32_t edge, double s,
                          double p, Cone cone);

// Action of a constant-speed run along the given oriented segments taking
// total time dt, by composite Simpson with `panels` panels per segment.
// Empty segments mean resting at x.
double fine_action(const GraphLagrangian& gl, GraphPoint x,
                   const std::vector<PathSegment>& segs, double dt,
                   int panels = 4096);

// Directed multigraph for cross-checking the min-mean-cycle search.
struct Arc {
    int from, to;
    double w;
};

// Minimum over all simple cycles of (arc-weight sum / arc count), by
// exhaustive enumeration. Infinity when the graph is acyclic. Usable up
// to ~6 nodes.
double exhaustive_min_mean(int n, const std::vector<Arc>& arcs);

// integral over [s0, s1] of sqrt(2 kappa (c - U)^+) ds on one edge, by
// composite Simpson. The stationary action of a direct crossing.
double maupertuis_length(const GraphLagrangian& gl, uint32_t edge, double s0,
                         double s1, double c, int panels = 200000);

}  // namespace oracle
