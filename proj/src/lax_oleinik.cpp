#include "graphkam/lax_oleinik.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline void step_one_target(const TransitionGraph& tg,
                            const std::vector<double>& in, StateId y,
                            double& out_y, StateId& arg_y) {
    double best = kInf;
    StateId best_from = kNoState;
    for (uint32_t i = tg.in_offsets[y]; i < tg.in_offsets[y + 1]; ++i) {
        StateId x = tg.in_from[i];
        if (in[x] == kInf) continue;
        double cand = in[x] + tg.in_weight[i];
        if (cand < best) {  // strict: ties keep the smaller source id
            best = cand;
            best_from = x;
        }
    }
    out_y = best;
    arg_y = best_from;
}

}  // namespace

void lo_step_serial(const TransitionGraph& tg, const std::vector<double>& in,
                    std::vector<double>& out, std::vector<StateId>* argmin) {
    const uint32_t n = tg.grid->state_count;
    if (in.size() != n) throw std::invalid_argument("lo_step: size mismatch");
    out.resize(n);
    if (argmin) argmin->resize(n);
    for (uint32_t y = 0; y < n; ++y) {
        StateId a;
        step_one_target(tg, in, y, out[y], a);
        if (argmin) (*argmin)[y] = a;
    }
}

void lo_step_parallel(const TransitionGraph& tg, const std::vector<double>& in,
                      std::vector<double>& out, std::vector<StateId>* argmin) {
    const uint32_t n = tg.grid->state_count;
    if (in.size() != n) throw std::invalid_argument("lo_step: size mismatch");
    out.resize(n);
    if (argmin) argmin->resize(n);
#pragma omp parallel for schedule(static)
    for (int64_t y = 0; y < static_cast<int64_t>(n); ++y) {
        StateId a;
        step_one_target(tg, in, static_cast<StateId>(y), out[y], a);
        if (argmin) (*argmin)[y] = a;
    }
}

EvolveResult lo_evolve(const TransitionGraph& tg, const std::vector<double>& u0,
                       const EvolveOptions& opt) {
    const uint32_t n = tg.grid->state_count;
    if (u0.size() != n) throw std::invalid_argument("lo_evolve: size mismatch");
    if (opt.max_steps == 0)
        throw std::invalid_argument("lo_evolve: max_steps must be positive");

    EvolveResult res;
    res.u = u0;
    std::vector<double> next(n);
    std::vector<StateId> arg;
    const double cdt = opt.c * tg.dt;
    uint32_t quiet = 0;

    if (opt.frame_stride > 0) {
        res.frames.push_back(res.u);
        res.frame_steps.push_back(0);
    }
    for (uint32_t step = 1; step <= opt.max_steps; ++step) {
        std::vector<StateId>* arg_ptr = opt.record_argmin ? &arg : nullptr;
        if (opt.parallel)
            lo_step_parallel(tg, res.u, next, arg_ptr);
        else
            lo_step_serial(tg, res.u, next, arg_ptr);

        double gap = 0.0;
        for (uint32_t s = 0; s < n; ++s) {
            double a = next[s];
            double b = res.u[s];
            if (a == kInf && b == kInf) continue;
            if (a == kInf || b == kInf) {
                gap = kInf;
                break;
            }
            gap = std::max(gap, std::fabs(a - b + cdt));
        }
        res.gap.push_back(gap);
        res.u.swap(next);
        res.steps = step;
        if (opt.record_argmin) res.argmin.push_back(arg);
        if (opt.frame_stride > 0 && step % opt.frame_stride == 0) {
            res.frames.push_back(res.u);
            res.frame_steps.push_back(step);
        }

        if (opt.stop_tol > 0.0) {
            quiet = (gap <= opt.stop_tol) ? quiet + 1 : 0;
            if (quiet >= opt.stop_window) {
                res.converged = true;
                break;
            }
        }
    }

    res.u_corrected = res.u;
    const double shift = static_cast<double>(res.steps) * cdt;
    for (double& v : res.u_corrected)
        if (v != kInf) v += shift;
    return res;
}

std::vector<double> finite_time_cost(
    const TransitionGraph& tg, StateId from, uint32_t steps,
    std::vector<std::vector<StateId>>* history) {
    GridFunction u0 = GridFunction::point_source(*tg.grid, from);
    EvolveOptions opt;
    opt.max_steps = steps;
    opt.record_argmin = history != nullptr;
    EvolveResult res = lo_evolve(tg, u0.values, opt);
    if (history) *history = std::move(res.argmin);
    return res.u;
}

std::vector<GraphPoint> backtrack_curve(
    const Grid& grid, const std::vector<std::vector<StateId>>& history,
    StateId final_state) {
    std::vector<GraphPoint> curve(history.size() + 1);
    StateId s = final_state;
    curve.back() = grid.point_of(s);
    for (size_t n = history.size(); n-- > 0;) {
        s = history[n][s];
        if (s == kNoState)
            throw std::runtime_error(
                "backtrack_curve: state was never reached at this step");
        curve[n] = grid.point_of(s);
    }
    return curve;
}

double curve_cost(const MetricGraph& g, const GraphLagrangian& gl,
                  const Grid& grid, const std::vector<GraphPoint>& curve,
                  double dt) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < curve.size(); ++i)
        total += one_step_cost(g, gl, grid, curve[i], curve[i + 1], dt);
    return total;
}

double energy_residual(const MetricGraph& g, const GraphLagrangian& gl,
                       const std::vector<GraphPoint>& curve, double dt,
                       double c, uint32_t skip_boundary) {
    if (curve.size() < 2) return 0.0;
    const size_t steps = curve.size() - 1;
    if (steps <= 2 * static_cast<size_t>(skip_boundary)) return 0.0;

    double worst = 0.0;
    for (size_t i = skip_boundary; i + skip_boundary < steps; ++i) {
        auto segs = g.geodesic_segments(curve[i], curve[i + 1]);
        double d = 0.0;
        for (const auto& seg : segs) d += seg.length();
        double speed = d / dt;
        if (segs.empty()) {
            // rest step: v = 0, sample at the point itself
            GraphPoint p = g.canonicalize(curve[i]);
            double u = gl.potential_at(p.edge, p.s);
            worst = std::max(worst, std::fabs(u - c));
            continue;
        }
        for (const auto& seg : segs) {
            if (seg.length() == 0.0) continue;
            double mid = 0.5 * (seg.s0 + seg.s1);
            double kappa = gl.edges[seg.edge].kappa;
            double u = gl.potential_at(seg.edge, mid);
            double e = 0.5 * kappa * speed * speed + u;
            worst = std::max(worst, std::fabs(e - c));
        }
    }
    return worst;
}

DominationReport check_dominated(const TransitionGraph& tg,
                                 const std::vector<double>& u, double c,
                                 double tol) {
    DominationReport rep;
    const uint32_t n = tg.grid->state_count;
    const double cdt = c * tg.dt;
    for (StateId y = 0; y < n; ++y) {
        for (uint32_t i = tg.in_offsets[y]; i < tg.in_offsets[y + 1]; ++i) {
            StateId x = tg.in_from[i];
            if (u[x] == kInf) continue;
            double viol;
            if (u[y] == kInf)
                viol = kInf;
            else
                viol = u[y] - u[x] - tg.in_weight[i] - cdt;
            if (viol > rep.max_violation) {
                rep.max_violation = viol;
                rep.worst_from = x;
                rep.worst_to = y;
            }
        }
    }
    rep.dominated = rep.max_violation <= tol;
    return rep;
}

}  // namespace graphkam
