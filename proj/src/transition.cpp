#include "graphkam/transition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphkam {

double one_step_cost(const MetricGraph& g, const GraphLagrangian& gl,
                     const Grid& grid, GraphPoint x, GraphPoint y, double dt) {
    auto segs = g.geodesic_segments(x, y);
    if (segs.empty()) {
        GraphPoint c = g.canonicalize(x);
        return dt * lagrangian_eval(gl, c.edge, c.s, 0.0);
    }
    double d = 0.0;
    for (const auto& s : segs) d += s.length();
    const double speed = d / dt;
    double cost = 0.0;
    for (const auto& seg : segs) {
        const double len = seg.length();
        const double dx = grid.edges[seg.edge].dx;
        const uint32_t pieces =
            static_cast<uint32_t>(std::max(1.0, std::ceil(len / dx - 1e-12)));
        const double step = (seg.s1 - seg.s0) / pieces;  // signed
        const double v = step > 0 ? speed : -speed;
        const double piece_time = len / pieces / speed;
        for (uint32_t i = 0; i < pieces; ++i) {
            const double mid = seg.s0 + step * (i + 0.5);
            cost += piece_time * lagrangian_eval(gl, seg.edge, mid, v);
        }
    }
    return cost;
}

namespace {

struct RawArc {
    StateId from, to;
    double weight, dist;
};

// All arcs leaving `from`, targets ascending.
void arcs_from(const Grid& grid, const GraphLagrangian& gl, double dt,
               double reach, StateId from, std::vector<RawArc>& out) {
    const MetricGraph& g = *grid.graph;
    const GraphPoint px = grid.point_of(from);
    for (StateId to = 0; to < grid.state_count; ++to) {
        const GraphPoint py = grid.point_of(to);
        const double d = g.distance(px, py);
        if (d > reach * (1.0 + 1e-12)) continue;
        out.push_back({from, to, one_step_cost(g, gl, grid, px, py, dt), d});
    }
}

TransitionGraph assemble(const Grid& grid, const GraphLagrangian& gl, double dt,
                         double vmax,
                         const std::vector<std::vector<RawArc>>& per_source) {
    TransitionGraph tg;
    tg.grid = &grid;
    tg.lagrangian = &gl;
    tg.dt = dt;
    tg.vmax = vmax;
    const uint32_t n = grid.state_count;
    std::vector<uint32_t> indeg(n, 0);
    size_t total = 0;
    for (const auto& arcs : per_source) {
        total += arcs.size();
        for (const auto& a : arcs) indeg[a.to]++;
    }
    tg.in_offsets.assign(n + 1, 0);
    for (uint32_t s = 0; s < n; ++s) tg.in_offsets[s + 1] = tg.in_offsets[s] + indeg[s];
    tg.in_from.resize(total);
    tg.in_weight.resize(total);
    tg.in_dist.resize(total);
    std::vector<uint32_t> cursor(tg.in_offsets.begin(), tg.in_offsets.end() - 1);
    // Source-major iteration keeps each target's source list ascending.
    for (const auto& arcs : per_source)
        for (const auto& a : arcs) {
            uint32_t at = cursor[a.to]++;
            tg.in_from[at] = a.from;
            tg.in_weight[at] = a.weight;
            tg.in_dist[at] = a.dist;
        }
    return tg;
}

TransitionGraph build_impl(const Grid& grid, const GraphLagrangian& gl,
                           double dt, double vmax, bool parallel) {
    if (!(dt > 0.0) || !(vmax > 0.0))
        throw std::invalid_argument("build_transitions: dt and vmax must be positive");
    const double reach = vmax * dt;
    if (reach < grid.min_dx() * (1.0 - 1e-12))
        throw std::invalid_argument(
            "build_transitions: vmax*dt smaller than the grid spacing, "
            "no neighbor is reachable");
    const uint32_t n = grid.state_count;
    std::vector<std::vector<RawArc>> per_source(n);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int64_t s = 0; s < static_cast<int64_t>(n); ++s)
            arcs_from(grid, gl, dt, reach, static_cast<StateId>(s), per_source[s]);
    } else {
        for (uint32_t s = 0; s < n; ++s)
            arcs_from(grid, gl, dt, reach, s, per_source[s]);
    }
    return assemble(grid, gl, dt, vmax, per_source);
}

}  // namespace

TransitionGraph build_transitions(const Grid& grid, const GraphLagrangian& gl,
                                  double dt, double vmax) {
    return build_impl(grid, gl, dt, vmax, true);
}

TransitionGraph build_transitions_serial(const Grid& grid,
                                         const GraphLagrangian& gl, double dt,
                                         double vmax) {
    return build_impl(grid, gl, dt, vmax, false);
}

double TransitionGraph::weight_between(StateId from, StateId to) const {
    for (uint32_t i = in_offsets[to]; i < in_offsets[to + 1]; ++i)
        if (in_from[i] == from) return in_weight[i];
    return GridFunction::sentinel();
}

}  // namespace graphkam
