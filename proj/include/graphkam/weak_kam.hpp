#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphkam/lax_oleinik.hpp"
#include "graphkam/transition.hpp"

namespace graphkam {

struct CriticalValue {
    enum class Method { MinMeanCycle, LongTimeSlope };
    Method method = Method::MinMeanCycle;
    double c = 0.0;
    // MinMeanCycle: a cycle realizing the minimum mean (first == last state).
    std::vector<StateId> cycle;
    // LongTimeSlope: max deviation of min_x u_k from the fitted line over
    // the fit range, and whether it is below the flagging threshold.
    double fit_residual = 0.0;
    bool slope_ok = true;
};

// c = -(minimum mean cycle weight)/dt, exact on the discrete model.
CriticalValue critical_value_mmc(const TransitionGraph& tg);

// Evolve u0 = 0 for `steps` steps and fit the slope of min_x u_k over the
// last half; c = -slope/dt. Cross-check method with its own error mode.
CriticalValue critical_value_slope(const TransitionGraph& tg,
                                   uint32_t steps = 256);

struct BarrierMatrix {
    enum class Kind { Mane, Peierls };
    Kind kind = Kind::Mane;
    double c = 0.0;
    double dt = 0.0;
    std::vector<StateId> sources;  // row order
    uint32_t targets = 0;          // columns are all states, id order

    std::vector<double> values;  // row-major sources x targets

    double at(size_t row, StateId y) const { return values[row * targets + y]; }
    // Row index of a source state; throws if absent.
    size_t row_of(StateId x) const;
    bool full() const;  // sources are exactly 0..targets-1 in order

    // Mane diagnostics: improvement still available when the sweep cap was
    // hit. Beyond eps_neg it means c was underestimated (negative cycle).
    double negative_cycle_excess = 0.0;
    double eps_neg = 0.0;
    bool negative_cycle = false;

    // Peierls window bookkeeping: first minimizing step count per entry,
    // and whether any entry only attained its min at n_max.
    uint32_t n_min = 0, n_max = 0;
    std::vector<uint32_t> argmin_n;
    bool window_boundary_hit = false;
};

// Phi(x,y) = min over walks of >= 1 arcs of the c-corrected weight sum
// (weights w + c*dt), one row per requested source.
BarrierMatrix mane_potential(const TransitionGraph& tg, double c,
                             const std::vector<StateId>& sources);

// The state walk realizing Phi(from, to), one arc per step, `from` first.
// Throws std::runtime_error on a broken parent chain (negative cycles).
std::vector<StateId> mane_minimizer(const TransitionGraph& tg, double c,
                                    StateId from, StateId to);

struct PeierlsWindow {
    uint32_t n_min = 0;
    uint32_t n_max = 0;
};
// n_min = max(ceil(4*diam/(vmax*dt)), 16); n_max = n_min + 3*states + 64.
// The margin keeps concatenated triangle-inequality witnesses inside the
// window; see peierls_barrier.
PeierlsWindow default_window(const TransitionGraph& tg);

// h(x,y) = min over n in [n_min, n_max] of (n-step cost + n*c*dt), the
// windowed surrogate of the liminf. argmin_n keeps the first minimizing n;
// a minimizer stuck at n_max sets window_boundary_hit ("window too small").
BarrierMatrix peierls_barrier(const TransitionGraph& tg, double c,
                              const std::vector<StateId>& sources,
                              uint32_t n_min, uint32_t n_max);

std::vector<StateId> all_states(const Grid& grid);

struct AubrySet {
    std::vector<StateId> members;  // h(x,x) <= tol, ascending ids
    double tol = 0.0;
    std::vector<double> diagonal;  // h(x,x) for every state
    double max_member_value = 0.0;
    double min_nonmember_value = 0.0;  // +inf when everything is a member
    std::string note;  // set when empty: suggests refinement
};
// Requires a full Peierls matrix (sources = all states).
AubrySet aubry_set(const BarrierMatrix& peierls_full, double tol);

// Membership is only meaningful above the critical-value uncertainty.
double default_aubry_tol(double c_method_disagreement);

struct WeakKamSolution {
    std::vector<double> v;     // min_z u0(z) + h(z,x)
    std::vector<double> v_rf;  // min over Aubry q of v(q) + h(q,x)
    double max_diff = 0.0;     // sup |v - v_rf|, small iff h factorizes
};
WeakKamSolution weak_kam_solution(const std::vector<double>& u0,
                                  const BarrierMatrix& peierls_full,
                                  const AubrySet& aubry);

struct ConvergenceRun {
    std::vector<double> times;  // k*dt
    std::vector<double> gaps;   // sup |u_k + k*c*dt - v_target|
    double final_gap = 0.0;
    uint32_t nonincreasing_from = 0;  // first index with monotone tail
    bool eventually_nonincreasing = false;  // tail covers the last half
};
ConvergenceRun convergence_run(const TransitionGraph& tg,
                               const std::vector<double>& u0, double c,
                               const std::vector<double>& v_target,
                               uint32_t steps);

// -h(., x0): the forward solution column. Requires a full matrix.
std::vector<double> forward_solution(const BarrierMatrix& peierls_full,
                                     StateId x0);

}  // namespace graphkam
