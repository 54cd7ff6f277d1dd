#include "graphkam/min_mean_cycle.hpp"

#include <algorithm>
#include <limits>

namespace graphkam {

MeanCycle min_mean_cycle(const Digraph& g) {
    const uint32_t n = g.nodes;
    const double inf = std::numeric_limits<double>::infinity();
    if (n == 0 || g.arcs.empty()) return {};

    // D[k][v] = min cost of a k-arc walk ending at v, any start node.
    std::vector<std::vector<double>> D(n + 1, std::vector<double>(n, inf));
    std::vector<std::vector<uint32_t>> par(n + 1,
                                           std::vector<uint32_t>(n, UINT32_MAX));
    std::fill(D[0].begin(), D[0].end(), 0.0);
    for (uint32_t k = 1; k <= n; ++k) {
        for (const auto& a : g.arcs) {
            if (D[k - 1][a.from] == inf) continue;
            double cand = D[k - 1][a.from] + a.weight;
            if (cand < D[k][a.to]) {
                D[k][a.to] = cand;
                par[k][a.to] = a.from;
            }
        }
    }

    double best = inf;
    uint32_t best_v = UINT32_MAX;
    for (uint32_t v = 0; v < n; ++v) {
        if (D[n][v] == inf) continue;
        double worst = -inf;
        for (uint32_t k = 0; k < n; ++k) {
            if (D[k][v] == inf) continue;
            worst = std::max(worst, (D[n][v] - D[k][v]) / (n - k));
        }
        if (worst < best) {
            best = worst;
            best_v = v;
        }
    }
    if (best_v == UINT32_MAX) return {};  // acyclic

    // Walk the n-arc parent chain from best_v; the first repeated node
    // closes a cycle of the optimal mean.
    std::vector<uint32_t> walk{best_v};
    uint32_t v = best_v;
    for (uint32_t k = n; k >= 1; --k) {
        v = par[k][v];
        walk.push_back(v);
    }
    std::vector<int64_t> seen(n, -1);
    MeanCycle out;
    out.found = true;
    out.mean = best;
    for (size_t i = 0; i < walk.size(); ++i) {
        if (seen[walk[i]] >= 0) {
            out.cycle.assign(walk.begin() + seen[walk[i]], walk.begin() + i + 1);
            std::reverse(out.cycle.begin(), out.cycle.end());
            break;
        }
        seen[walk[i]] = static_cast<int64_t>(i);
    }
    return out;
}

}  // namespace graphkam
