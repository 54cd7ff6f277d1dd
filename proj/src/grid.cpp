#include "graphkam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphkam {

Grid build_grid(const MetricGraph& g, double dx_target) {
    if (!(dx_target > 0.0) || !std::isfinite(dx_target))
        throw std::invalid_argument("build_grid: dx_target must be positive");
    Grid grid;
    grid.graph = &g;
    grid.dx_target = dx_target;
    grid.vertex_state.resize(g.vertex_count());
    for (uint32_t v = 0; v < g.vertex_count(); ++v) grid.vertex_state[v] = v;
    uint32_t next = static_cast<uint32_t>(g.vertex_count());
    grid.edges.resize(g.edge_count());
    for (uint32_t e = 0; e < g.edge_count(); ++e) {
        const double len = g.edge(e).length;
        uint32_t cells =
            static_cast<uint32_t>(std::max(1.0, std::ceil(len / dx_target - 1e-12)));
        grid.edges[e] = {cells, len / cells, next};
        next += cells - 1;
    }
    grid.state_count = next;
    return grid;
}

GraphPoint Grid::point_of(StateId s) const {
    if (s < vertex_state.size()) return graph->vertex_point(s);
    for (uint32_t e = 0; e < edges.size(); ++e) {
        const EdgeGrid& eg = edges[e];
        if (s >= eg.first_interior && s < eg.first_interior + (eg.cells - 1)) {
            uint32_t k = s - eg.first_interior + 1;
            return {e, k * eg.dx};
        }
    }
    throw std::invalid_argument("point_of: state id out of range");
}

StateId Grid::state_near(GraphPoint p) const {
    p = graph->canonicalize(p);
    if (graph->is_vertex_point(p)) return vertex_state[graph->vertex_at(p)];
    const EdgeGrid& eg = edges[p.edge];
    double kf = p.s / eg.dx;
    uint32_t k = static_cast<uint32_t>(std::floor(kf));
    if (kf - k > 0.5) ++k;
    k = std::min(k, eg.cells);
    return node(p.edge, k);
}

double Grid::min_dx() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& eg : edges) m = std::min(m, eg.dx);
    return m;
}

}  // namespace graphkam
