#pragma once

#include <cstdint>
#include <vector>

#include "graphkam/transition.hpp"

namespace graphkam {

// One backward Lax-Oleinik step: out[y] = min over arcs x->y of
// in[x] + cost(x,y). States with no finite predecessor stay at the
// sentinel. When argmin is non-null it receives, per target, the
// minimizing source (smallest StateId on exact ties; kNoState when the
// result is the sentinel).
void lo_step_serial(const TransitionGraph& tg, const std::vector<double>& in,
                    std::vector<double>& out,
                    std::vector<StateId>* argmin = nullptr);

// OpenMP version, bit-identical to the serial kernel (targets are
// independent and each target scans its sources in the same order).
void lo_step_parallel(const TransitionGraph& tg, const std::vector<double>& in,
                      std::vector<double>& out,
                      std::vector<StateId>* argmin = nullptr);

struct EvolveOptions {
    uint32_t max_steps = 0;   // hard cap, required
    double c = 0.0;           // per-step correction c*dt for the gap/final
    double stop_tol = 0.0;    // >0: stop once the corrected sup gap stays
    uint32_t stop_window = 10;  // below stop_tol this many steps in a row
    uint32_t frame_stride = 0;  // >0: keep raw frames every stride steps
    bool record_argmin = false;
    bool parallel = true;
};

struct EvolveResult {
    std::vector<double> u;            // raw values after `steps` steps
    std::vector<double> u_corrected;  // u + steps*c*dt
    uint32_t steps = 0;
    bool converged = false;  // stop_tol criterion met before max_steps
    // gap[n-1] = sup over states of |u_n - u_{n-1} + c*dt| (step n),
    // +inf while some state is still flipping from the sentinel.
    std::vector<double> gap;
    std::vector<std::vector<double>> frames;  // raw, frame_steps[i] steps in
    std::vector<uint32_t> frame_steps;
    // argmin[n-1][y] = minimizing source of step n at target y.
    std::vector<std::vector<StateId>> argmin;
};

// Iterated backward evolution u_{n+1} = (one step applied to u_n) from u0.
EvolveResult lo_evolve(const TransitionGraph& tg, const std::vector<double>& u0,
                       const EvolveOptions& opt);

// Value of the finite-horizon problem from one source state: cheapest
// `steps`-step discrete curve cost, sentinel where unreachable. Fills the
// per-step argmin tables for backtracking when history is non-null.
std::vector<double> finite_time_cost(
    const TransitionGraph& tg, StateId from, uint32_t steps,
    std::vector<std::vector<StateId>>* history = nullptr);

// Reconstruct the discrete minimizing curve that realized final_state,
// walking the per-step argmin tables backwards. Returned forward in time,
// one point per step boundary (steps+1 points). Throws std::runtime_error
// if the chain hits an undefined entry.
std::vector<GraphPoint> backtrack_curve(
    const Grid& grid, const std::vector<std::vector<StateId>>& history,
    StateId final_state);

// Action of a discrete curve: sum of one_step_cost over consecutive points.
double curve_cost(const MetricGraph& g, const GraphLagrangian& gl,
                  const Grid& grid, const std::vector<GraphPoint>& curve,
                  double dt);

// Energy defect along a discrete curve. Each step moves at constant speed
// v = d/dt along a geodesic; the conserved quantity of the continuous flow
// is kappa*v^2/2 + U, so the defect sampled at sub-segment midpoints is
// |kappa*v^2/2 + U(mid) - c|. The first and last skip_boundary steps are
// ignored (backtracked curves are polluted there by the endpoint data).
// Returns the max over sampled points; 0 for curves with too few steps.
double energy_residual(const MetricGraph& g, const GraphLagrangian& gl,
                       const std::vector<GraphPoint>& curve, double dt,
                       double c, uint32_t skip_boundary = 1);

struct DominationReport {
    bool dominated = false;
    double max_violation = 0.0;  // max over arcs of u(y)-u(x)-w(x,y)-c*dt
    StateId worst_from = kNoState;
    StateId worst_to = kNoState;
};

// Checks u(y) <= u(x) + cost(x,y) + c*dt on every arc, up to tol.
// Sentinel sources are skipped; a sentinel target with a finite source
// counts as a violation of +inf.
DominationReport check_dominated(const TransitionGraph& tg,
                                 const std::vector<double>& u, double c,
                                 double tol);

}  // namespace graphkam
