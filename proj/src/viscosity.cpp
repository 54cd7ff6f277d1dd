#include "graphkam/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ham(const GraphLagrangian& gl, uint32_t e, double s, double p) {
    return hamiltonian_eval(gl, e, s, p, Cone::FullLine).value;
}

// Sub/super violations of one interior state at level c.
void classify_interior(const GraphLagrangian& gl, uint32_t e, double s,
                       double pm, double pp, double c, double slope_tol,
                       StateClass& cls, double& sub, double& super) {
    sub = 0.0;
    super = 0.0;
    if (std::fabs(pp - pm) <= slope_tol) {
        cls = StateClass::Differentiable;
        double h = ham(gl, e, s, 0.5 * (pm + pp));
        sub = std::max(0.0, h - c);
        super = std::max(0.0, c - h);
    } else if (pm > pp) {
        // test functions touch from above with slopes in [pp, pm]
        cls = StateClass::ConcaveKink;
        double hmax = -kInf;
        for (int t = 0; t <= 8; ++t)
            hmax = std::max(hmax, ham(gl, e, s, pp + (pm - pp) * t / 8.0));
        sub = std::max(0.0, hmax - c);
    } else {
        cls = StateClass::ConvexKink;
        double hmin = kInf;
        for (int t = 0; t <= 8; ++t)
            hmin = std::min(hmin, ham(gl, e, s, pm + (pp - pm) * t / 8.0));
        super = std::max(0.0, c - hmin);
    }
}

// Eikonal vertex value: max over incident edges of H at the outward slope.
double vertex_hmax(const GraphLagrangian& gl, const Grid& grid, uint32_t v,
                   const std::vector<double>& outward) {
    const MetricGraph& g = *grid.graph;
    const auto& inc = g.incident(v);
    double hmax = -kInf;
    for (size_t i = 0; i < inc.size(); ++i) {
        auto [e, end] = inc[i];
        double s = (end == 0) ? 0.0 : g.edge(e).length;
        hmax = std::max(hmax, ham(gl, e, s, outward[i]));
    }
    return hmax;
}

void require_eikonal(const GraphLagrangian& gl, const char* who) {
    SymmetryReport sym = check_symmetric_at_vertices(gl);
    if (!sym.symmetric)
        throw std::invalid_argument(
            std::string(who) +
            ": needs a Lagrangian symmetric at the vertices (" + sym.detail +
            ")");
}

struct Acc {
    ViscosityReport* rep;
    void add(StateId sid, double sub, double super, bool store) {
        if (store) {
            rep->sub_violation[sid] =
                std::max(rep->sub_violation[sid], sub);
            rep->super_violation[sid] =
                std::max(rep->super_violation[sid], super);
        }
        if (sub > rep->sub_residual) {
            rep->sub_residual = sub;
            rep->worst_sub = sid;
        }
        if (super > rep->super_residual) {
            rep->super_residual = super;
            rep->worst_super = sid;
        }
    }
};

}  // namespace

SlopeProfile one_sided_slopes(const std::vector<double>& u, const Grid& grid) {
    const MetricGraph& g = *grid.graph;
    SlopeProfile sp;
    sp.grid = &grid;
    sp.p_minus.assign(grid.state_count, kNaN);
    sp.p_plus.assign(grid.state_count, kNaN);
    sp.vertex_outward.resize(g.vertex_count());

    auto track = [&sp](double p) {
        sp.max_abs_slope = std::max(sp.max_abs_slope, std::fabs(p));
    };

    for (uint32_t e = 0; e < g.edge_count(); ++e) {
        const auto& eg = grid.edges[e];
        for (uint32_t k = 1; k < eg.cells; ++k) {
            StateId sid = grid.node(e, k);
            sp.p_minus[sid] = (u[sid] - u[grid.node(e, k - 1)]) / eg.dx;
            sp.p_plus[sid] = (u[grid.node(e, k + 1)] - u[sid]) / eg.dx;
            track(sp.p_minus[sid]);
            track(sp.p_plus[sid]);
        }
    }
    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        StateId vs = grid.vertex_state[v];
        for (auto [e, end] : g.incident(v)) {
            const auto& eg = grid.edges[e];
            StateId inward =
                (end == 0) ? grid.node(e, 1) : grid.node(e, eg.cells - 1);
            double d = (u[inward] - u[vs]) / eg.dx;
            sp.vertex_outward[v].push_back(d);
            track(d);
        }
    }
    return sp;
}

double default_slope_tol(const Grid& grid) {
    double dx = 0.0;
    for (const auto& eg : grid.edges) dx = std::max(dx, eg.dx);
    return 8.0 * dx;
}

ViscosityReport check_stationary(const std::vector<double>& u,
                                 const GraphLagrangian& gl, const Grid& grid,
                                 double c, double tol, double slope_tol) {
    require_eikonal(gl, "check_stationary");
    if (u.size() != grid.state_count)
        throw std::invalid_argument("check_stationary: size mismatch");

    const MetricGraph& g = *grid.graph;
    SlopeProfile sp = one_sided_slopes(u, grid);

    ViscosityReport rep;
    rep.tol = tol;
    rep.slope_tol = slope_tol;
    rep.classes.assign(grid.state_count, StateClass::Differentiable);
    rep.sub_violation.assign(grid.state_count, 0.0);
    rep.super_violation.assign(grid.state_count, 0.0);
    Acc acc{&rep};

    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        StateId sid = grid.vertex_state[v];
        rep.classes[sid] = StateClass::Vertex;
        ++rep.count_vertex;
        double hmax = vertex_hmax(gl, grid, v, sp.vertex_outward[v]);
        acc.add(sid, std::max(0.0, hmax - c), std::max(0.0, c - hmax), true);
    }
    for (uint32_t e = 0; e < g.edge_count(); ++e) {
        const auto& eg = grid.edges[e];
        for (uint32_t k = 1; k < eg.cells; ++k) {
            StateId sid = grid.node(e, k);
            StateClass cls;
            double sub, super;
            classify_interior(gl, e, k * eg.dx, sp.p_minus[sid],
                              sp.p_plus[sid], c, slope_tol, cls, sub, super);
            rep.classes[sid] = cls;
            if (cls == StateClass::Differentiable)
                ++rep.count_differentiable;
            else if (cls == StateClass::ConcaveKink)
                ++rep.count_concave;
            else
                ++rep.count_convex;
            acc.add(sid, sub, super, true);
        }
    }
    rep.pass = rep.sub_residual <= tol && rep.super_residual <= tol;
    return rep;
}

ViscosityReport check_time_dependent(
    const std::vector<std::vector<double>>& frames, double frame_dt,
    const GraphLagrangian& gl, const Grid& grid, double tol,
    double slope_tol) {
    if (frames.size() < 3)
        throw std::invalid_argument("check_time_dependent: need >= 3 frames");
    if (frame_dt <= 0.0)
        throw std::invalid_argument("check_time_dependent: bad frame spacing");
    for (const auto& f : frames)
        if (f.size() != grid.state_count)
            throw std::invalid_argument("check_time_dependent: size mismatch");
    require_eikonal(gl, "check_time_dependent");

    const MetricGraph& g = *grid.graph;
    ViscosityReport rep;
    rep.tol = tol;
    rep.slope_tol = slope_tol;
    rep.classes.assign(grid.state_count, StateClass::Differentiable);
    rep.sub_violation.assign(grid.state_count, 0.0);
    rep.super_violation.assign(grid.state_count, 0.0);
    Acc acc{&rep};

    const size_t central =
        std::clamp<size_t>(frames.size() / 2, 1, frames.size() - 2);
    for (size_t mid = 1; mid + 1 < frames.size(); ++mid) {
        const auto& um = frames[mid];
        const auto& before = frames[mid - 1];
        const auto& after = frames[mid + 1];
        SlopeProfile sp = one_sided_slopes(um, grid);
        const bool store = (mid == central);

        auto ut_ok = [&](StateId sid, double& c_local) {
            if (um[sid] == kInf || before[sid] == kInf || after[sid] == kInf)
                return false;
            c_local = -(after[sid] - before[sid]) / (2.0 * frame_dt);
            return true;
        };

        for (uint32_t v = 0; v < g.vertex_count(); ++v) {
            StateId sid = grid.vertex_state[v];
            double c_local;
            if (!ut_ok(sid, c_local)) continue;
            bool finite = true;
            for (double d : sp.vertex_outward[v])
                if (!std::isfinite(d)) finite = false;
            if (!finite) continue;
            double hmax = vertex_hmax(gl, grid, v, sp.vertex_outward[v]);
            if (store) {
                rep.classes[sid] = StateClass::Vertex;
                ++rep.count_vertex;
            }
            acc.add(sid, std::max(0.0, hmax - c_local),
                    std::max(0.0, c_local - hmax), store);
        }
        for (uint32_t e = 0; e < g.edge_count(); ++e) {
            const auto& eg = grid.edges[e];
            for (uint32_t k = 1; k < eg.cells; ++k) {
                StateId sid = grid.node(e, k);
                double c_local;
                if (!ut_ok(sid, c_local)) continue;
                if (!std::isfinite(sp.p_minus[sid]) ||
                    !std::isfinite(sp.p_plus[sid]))
                    continue;
                StateClass cls;
                double sub, super;
                classify_interior(gl, e, k * eg.dx, sp.p_minus[sid],
                                  sp.p_plus[sid], c_local, slope_tol, cls, sub,
                                  super);
                if (store) {
                    rep.classes[sid] = cls;
                    if (cls == StateClass::Differentiable)
                        ++rep.count_differentiable;
                    else if (cls == StateClass::ConcaveKink)
                        ++rep.count_concave;
                    else
                        ++rep.count_convex;
                }
                acc.add(sid, sub, super, store);
            }
        }
    }
    rep.pass = rep.sub_residual <= tol && rep.super_residual <= tol;
    return rep;
}

ComparisonResult comparison_probe(
    const std::vector<std::vector<double>>& u_frames,
    const std::vector<std::vector<double>>& v_frames, double tol) {
    if (u_frames.size() != v_frames.size() || u_frames.empty())
        throw std::invalid_argument("comparison_probe: frame count mismatch");
    for (size_t k = 0; k < u_frames.size(); ++k)
        if (u_frames[k].size() != v_frames[k].size())
            throw std::invalid_argument("comparison_probe: size mismatch");
    for (size_t x = 0; x < u_frames[0].size(); ++x) {
        double a = u_frames[0][x], b = v_frames[0][x];
        bool ordered = (b == kInf) || (a != kInf && a <= b);
        if (!ordered)
            throw std::invalid_argument(
                "comparison_probe: initial frames are not ordered");
    }

    ComparisonResult res;
    for (size_t k = 0; k < u_frames.size(); ++k) {
        for (size_t x = 0; x < u_frames[k].size(); ++x) {
            double a = u_frames[k][x], b = v_frames[k][x];
            double viol;
            if (a == kInf && b == kInf)
                viol = 0.0;
            else if (a == kInf)
                viol = kInf;
            else if (b == kInf)
                viol = 0.0;
            else
                viol = a - b;
            if (viol > res.max_violation) {
                res.max_violation = viol;
                res.worst_frame = static_cast<uint32_t>(k);
                res.worst_state = static_cast<StateId>(x);
            }
        }
    }
    res.pass = res.max_violation <= tol;
    return res;
}

}  // namespace graphkam
