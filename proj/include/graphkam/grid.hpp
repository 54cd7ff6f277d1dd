#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "graphkam/metric_graph.hpp"

namespace graphkam {

using StateId = uint32_t;
constexpr StateId kNoState = UINT32_MAX;

// Uniform nodes per edge, vertex states shared between edges. States are
// numbered deterministically: vertices first (graph order, which is
// name-sorted), then interior nodes edge by edge, ascending offset.
struct Grid {
    const MetricGraph* graph = nullptr;
    double dx_target = 0.0;

    struct EdgeGrid {
        uint32_t cells;          // number of dx-intervals (>= 1)
        double dx;               // edge length / cells, <= dx_target
        StateId first_interior;  // id of node k=1; cells-1 interior nodes
    };
    std::vector<EdgeGrid> edges;
    std::vector<StateId> vertex_state;  // one per vertex
    uint32_t state_count = 0;

    // Node k of an edge, k in [0, cells]; ends resolve to vertex states.
    StateId node(uint32_t edge, uint32_t k) const {
        const EdgeGrid& eg = edges[edge];
        if (k == 0) return vertex_state[graph->edge(edge).v0];
        if (k == eg.cells) return vertex_state[graph->edge(edge).v1];
        return eg.first_interior + (k - 1);
    }
    GraphPoint point_of(StateId s) const;
    // Nearest grid state to p (ties toward smaller offset).
    StateId state_near(GraphPoint p) const;
    double min_dx() const;
};

// Throws std::invalid_argument for non-positive dx_target.
Grid build_grid(const MetricGraph& g, double dx_target);

// Values over grid states; +inf is the reserved sentinel for "unset".
struct GridFunction {
    const Grid* grid = nullptr;
    std::vector<double> values;

    static constexpr double sentinel() {
        return std::numeric_limits<double>::infinity();
    }
    static GridFunction constant(const Grid& g, double v) {
        return {&g, std::vector<double>(g.state_count, v)};
    }
    static GridFunction point_source(const Grid& g, StateId at) {
        GridFunction f{&g, std::vector<double>(g.state_count, sentinel())};
        f.values[at] = 0.0;
        return f;
    }
};

}  // namespace graphkam
