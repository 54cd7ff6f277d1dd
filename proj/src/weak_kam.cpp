#include "graphkam/weak_kam.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphkam/min_mean_cycle.hpp"

namespace graphkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BfRow {
    std::vector<double> dist;
    std::vector<StateId> parent;
    double excess = 0.0;  // improvement still seen at the sweep cap
};

// Jacobi Bellman-Ford over the c-corrected in-CSR: every sweep reads the
// previous layer only, so results (parents included) are bit-identical
// serial or parallel. Walks have >= 1 arc by construction.
BfRow bf_row(const TransitionGraph& tg, double cdt, StateId source,
             bool parallel) {
    const uint32_t n = tg.grid->state_count;
    BfRow r;
    r.dist.assign(n, kInf);
    r.parent.assign(n, kNoState);

    for (uint32_t y = 0; y < n; ++y) {
        for (uint32_t i = tg.in_offsets[y]; i < tg.in_offsets[y + 1]; ++i) {
            if (tg.in_from[i] != source) continue;
            double w = tg.in_weight[i] + cdt;
            if (w < r.dist[y]) {
                r.dist[y] = w;
                r.parent[y] = source;
            }
        }
    }

    std::vector<double> next(n);
    std::vector<StateId> next_par(n);
    std::vector<double> improve(n);
    const uint32_t cap = n + 1;
    for (uint32_t sweep = 1; sweep <= cap; ++sweep) {
#pragma omp parallel for schedule(static) if (parallel)
        for (int64_t yy = 0; yy < static_cast<int64_t>(n); ++yy) {
            const StateId y = static_cast<StateId>(yy);
            double best = r.dist[y];
            StateId bp = r.parent[y];
            for (uint32_t i = tg.in_offsets[y]; i < tg.in_offsets[y + 1];
                 ++i) {
                StateId x = tg.in_from[i];
                if (r.dist[x] == kInf) continue;
                double cand = r.dist[x] + tg.in_weight[i] + cdt;
                if (cand < best) {
                    best = cand;
                    bp = x;
                }
            }
            next[y] = best;
            next_par[y] = bp;
            improve[y] =
                (best < r.dist[y]) ? (r.dist[y] == kInf ? kInf : r.dist[y] - best)
                                   : 0.0;
        }
        double imp = 0.0;
        for (uint32_t y = 0; y < n; ++y) imp = std::max(imp, improve[y]);
        r.dist.swap(next);
        r.parent.swap(next_par);
        if (imp == 0.0) break;
        if (sweep == cap) r.excess = imp;
    }
    return r;
}

double corrected_weight_scale(const TransitionGraph& tg, double cdt) {
    double scale = 1.0;
    for (double w : tg.in_weight) scale = std::max(scale, std::fabs(w + cdt));
    return scale;
}

}  // namespace

CriticalValue critical_value_mmc(const TransitionGraph& tg) {
    const uint32_t n = tg.grid->state_count;
    Digraph g;
    g.nodes = n;
    g.arcs.reserve(tg.arc_count());
    for (uint32_t y = 0; y < n; ++y)
        for (uint32_t i = tg.in_offsets[y]; i < tg.in_offsets[y + 1]; ++i)
            g.arcs.push_back({tg.in_from[i], y, tg.in_weight[i]});
    MeanCycle mc = min_mean_cycle(g);
    if (!mc.found)
        throw std::logic_error("critical_value: no cycle (missing self-arcs)");
    CriticalValue cv;
    cv.method = CriticalValue::Method::MinMeanCycle;
    cv.c = -mc.mean / tg.dt;
    cv.cycle = std::move(mc.cycle);
    return cv;
}

CriticalValue critical_value_slope(const TransitionGraph& tg, uint32_t steps) {
    if (steps < 8)
        throw std::invalid_argument("critical_value_slope: need >= 8 steps");
    const uint32_t n = tg.grid->state_count;
    std::vector<double> u(n, 0.0), next(n);
    std::vector<double> mins(steps + 1);
    mins[0] = 0.0;
    for (uint32_t k = 1; k <= steps; ++k) {
        lo_step_parallel(tg, u, next);
        u.swap(next);
        mins[k] = *std::min_element(u.begin(), u.end());
    }

    const uint32_t k0 = steps / 2;
    double kbar = 0.0, mbar = 0.0;
    const uint32_t cnt = steps - k0 + 1;
    for (uint32_t k = k0; k <= steps; ++k) {
        kbar += k;
        mbar += mins[k];
    }
    kbar /= cnt;
    mbar /= cnt;
    double sxx = 0.0, sxy = 0.0;
    for (uint32_t k = k0; k <= steps; ++k) {
        sxx += (k - kbar) * (k - kbar);
        sxy += (k - kbar) * (mins[k] - mbar);
    }
    const double slope = sxy / sxx;
    const double a = mbar - slope * kbar;

    CriticalValue cv;
    cv.method = CriticalValue::Method::LongTimeSlope;
    cv.c = -slope / tg.dt;
    for (uint32_t k = k0; k <= steps; ++k)
        cv.fit_residual =
            std::max(cv.fit_residual, std::fabs(mins[k] - (a + slope * k)));
    const double range = std::fabs(mins[steps] - mins[k0]);
    cv.slope_ok = cv.fit_residual <= 1e-6 * (1.0 + range);
    return cv;
}

size_t BarrierMatrix::row_of(StateId x) const {
    if (full()) return x;
    for (size_t i = 0; i < sources.size(); ++i)
        if (sources[i] == x) return i;
    throw std::out_of_range("BarrierMatrix: state is not a source row");
}

bool BarrierMatrix::full() const {
    if (sources.size() != targets) return false;
    for (uint32_t i = 0; i < targets; ++i)
        if (sources[i] != i) return false;
    return true;
}

BarrierMatrix mane_potential(const TransitionGraph& tg, double c,
                             const std::vector<StateId>& sources) {
    const uint32_t n = tg.grid->state_count;
    const double cdt = c * tg.dt;
    BarrierMatrix m;
    m.kind = BarrierMatrix::Kind::Mane;
    m.c = c;
    m.dt = tg.dt;
    m.sources = sources;
    m.targets = n;
    m.values.assign(sources.size() * size_t{n}, kInf);
    m.eps_neg = 10.0 * DBL_EPSILON * n * corrected_weight_scale(tg, cdt);

    std::vector<double> excess(sources.size(), 0.0);
    const bool many_rows = sources.size() >= 4;
#pragma omp parallel for schedule(dynamic) if (many_rows)
    for (int64_t r = 0; r < static_cast<int64_t>(sources.size()); ++r) {
        BfRow row = bf_row(tg, cdt, sources[r], !many_rows);
        std::copy(row.dist.begin(), row.dist.end(),
                  m.values.begin() + r * size_t{n});
        excess[r] = row.excess;
    }
    for (double e : excess)
        m.negative_cycle_excess = std::max(m.negative_cycle_excess, e);
    m.negative_cycle = m.negative_cycle_excess > m.eps_neg;
    return m;
}

std::vector<StateId> mane_minimizer(const TransitionGraph& tg, double c,
                                    StateId from, StateId to) {
    const uint32_t n = tg.grid->state_count;
    BfRow row = bf_row(tg, c * tg.dt, from, true);
    if (row.dist[to] == kInf)
        throw std::runtime_error("mane_minimizer: target unreachable");
    std::vector<StateId> rev{to};
    StateId cur = to;
    do {
        cur = row.parent[cur];
        if (cur == kNoState || rev.size() > size_t{n} + 2)
            throw std::runtime_error("mane_minimizer: broken parent chain");
        rev.push_back(cur);
    } while (cur != from);
    std::reverse(rev.begin(), rev.end());
    return rev;
}

PeierlsWindow default_window(const TransitionGraph& tg) {
    const double diam = tg.grid->graph->diameter();
    PeierlsWindow w;
    double lo = 4.0 * diam / (tg.vmax * tg.dt);
    w.n_min = std::max<uint32_t>(
        16, static_cast<uint32_t>(std::ceil(lo - 1e-12)));
    w.n_max = w.n_min + 3 * tg.grid->state_count + 64;
    return w;
}

BarrierMatrix peierls_barrier(const TransitionGraph& tg, double c,
                              const std::vector<StateId>& sources,
                              uint32_t n_min, uint32_t n_max) {
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("peierls_barrier: bad window");
    const uint32_t n = tg.grid->state_count;
    const double cdt = c * tg.dt;
    BarrierMatrix m;
    m.kind = BarrierMatrix::Kind::Peierls;
    m.c = c;
    m.dt = tg.dt;
    m.sources = sources;
    m.targets = n;
    m.n_min = n_min;
    m.n_max = n_max;
    m.values.assign(sources.size() * size_t{n}, kInf);
    m.argmin_n.assign(sources.size() * size_t{n}, 0);

#pragma omp parallel for schedule(dynamic)
    for (int64_t r = 0; r < static_cast<int64_t>(sources.size()); ++r) {
        std::vector<double> u(n, kInf), next(n);
        u[sources[r]] = 0.0;
        double* best = m.values.data() + r * size_t{n};
        uint32_t* argn = m.argmin_n.data() + r * size_t{n};
        for (uint32_t k = 1; k <= n_max; ++k) {
            lo_step_serial(tg, u, next);
            u.swap(next);
            if (k < n_min) continue;
            const double shift = static_cast<double>(k) * cdt;
            for (uint32_t y = 0; y < n; ++y) {
                if (u[y] == kInf) continue;
                double corr = u[y] + shift;
                if (corr < best[y]) {
                    best[y] = corr;
                    argn[y] = k;
                }
            }
        }
    }
    for (size_t i = 0; i < m.values.size(); ++i)
        if (m.values[i] != kInf && m.argmin_n[i] == n_max)
            m.window_boundary_hit = true;
    return m;
}

std::vector<StateId> all_states(const Grid& grid) {
    std::vector<StateId> s(grid.state_count);
    for (uint32_t i = 0; i < grid.state_count; ++i) s[i] = i;
    return s;
}

AubrySet aubry_set(const BarrierMatrix& peierls_full, double tol) {
    if (peierls_full.kind != BarrierMatrix::Kind::Peierls ||
        !peierls_full.full())
        throw std::invalid_argument("aubry_set: need a full Peierls matrix");
    AubrySet a;
    a.tol = tol;
    const uint32_t n = peierls_full.targets;
    a.diagonal.resize(n);
    a.min_nonmember_value = kInf;
    for (uint32_t x = 0; x < n; ++x) {
        double d = peierls_full.at(x, x);
        a.diagonal[x] = d;
        if (d <= tol) {
            a.members.push_back(x);
            a.max_member_value = std::max(a.max_member_value, d);
        } else {
            a.min_nonmember_value = std::min(a.min_nonmember_value, d);
        }
    }
    if (a.members.empty())
        a.note =
            "no states within tolerance: the diagonal minimum is " +
            std::to_string(a.min_nonmember_value) +
            "; refine the grid or raise the tolerance";
    return a;
}

double default_aubry_tol(double c_method_disagreement) {
    return 2.0 * std::fabs(c_method_disagreement) + 1e-3;
}

WeakKamSolution weak_kam_solution(const std::vector<double>& u0,
                                  const BarrierMatrix& peierls_full,
                                  const AubrySet& aubry) {
    if (!peierls_full.full())
        throw std::invalid_argument(
            "weak_kam_solution: need a full Peierls matrix");
    const uint32_t n = peierls_full.targets;
    if (u0.size() != n)
        throw std::invalid_argument("weak_kam_solution: size mismatch");

    WeakKamSolution sol;
    sol.v.assign(n, kInf);
    for (uint32_t z = 0; z < n; ++z) {
        if (u0[z] == kInf) continue;
        const double* row = peierls_full.values.data() + z * size_t{n};
        for (uint32_t x = 0; x < n; ++x) {
            double cand = u0[z] + row[x];
            if (cand < sol.v[x]) sol.v[x] = cand;
        }
    }

    sol.v_rf.assign(n, kInf);
    for (StateId q : aubry.members) {
        if (sol.v[q] == kInf) continue;
        const double* row = peierls_full.values.data() + q * size_t{n};
        for (uint32_t x = 0; x < n; ++x) {
            double cand = sol.v[q] + row[x];
            if (cand < sol.v_rf[x]) sol.v_rf[x] = cand;
        }
    }

    for (uint32_t x = 0; x < n; ++x) {
        double d;
        if (sol.v[x] == kInf && sol.v_rf[x] == kInf)
            d = 0.0;
        else if (sol.v[x] == kInf || sol.v_rf[x] == kInf)
            d = kInf;
        else
            d = std::fabs(sol.v[x] - sol.v_rf[x]);
        sol.max_diff = std::max(sol.max_diff, d);
    }
    return sol;
}

ConvergenceRun convergence_run(const TransitionGraph& tg,
                               const std::vector<double>& u0, double c,
                               const std::vector<double>& v_target,
                               uint32_t steps) {
    const uint32_t n = tg.grid->state_count;
    if (u0.size() != n || v_target.size() != n)
        throw std::invalid_argument("convergence_run: size mismatch");
    const double cdt = c * tg.dt;

    ConvergenceRun run;
    std::vector<double> u = u0, next(n);
    for (uint32_t k = 1; k <= steps; ++k) {
        lo_step_parallel(tg, u, next);
        u.swap(next);
        const double shift = static_cast<double>(k) * cdt;
        double gap = 0.0;
        for (uint32_t y = 0; y < n; ++y) {
            double a = u[y] == kInf ? kInf : u[y] + shift;
            if (a == kInf && v_target[y] == kInf) continue;
            if (a == kInf || v_target[y] == kInf) {
                gap = kInf;
                break;
            }
            gap = std::max(gap, std::fabs(a - v_target[y]));
        }
        run.times.push_back(k * tg.dt);
        run.gaps.push_back(gap);
    }
    run.final_gap = run.gaps.empty() ? 0.0 : run.gaps.back();

    uint32_t from = 0;
    for (size_t i = run.gaps.size(); i-- > 1;) {
        if (run.gaps[i] > run.gaps[i - 1] + 1e-12) {
            from = static_cast<uint32_t>(i);
            break;
        }
    }
    run.nonincreasing_from = from;
    run.eventually_nonincreasing = from <= run.gaps.size() / 2;
    return run;
}

std::vector<double> forward_solution(const BarrierMatrix& peierls_full,
                                     StateId x0) {
    if (!peierls_full.full())
        throw std::invalid_argument(
            "forward_solution: need a full Peierls matrix");
    const uint32_t n = peierls_full.targets;
    std::vector<double> out(n);
    for (uint32_t z = 0; z < n; ++z) out[z] = -peierls_full.at(z, x0);
    return out;
}

}  // namespace graphkam
