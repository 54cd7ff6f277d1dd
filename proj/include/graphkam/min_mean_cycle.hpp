#pragma once

#include <cstdint>
#include <vector>

namespace graphkam {

struct Digraph {
    struct Arc {
        uint32_t from, to;
        double weight;
    };
    uint32_t nodes = 0;
    std::vector<Arc> arcs;
};

struct MeanCycle {
    double mean = 0.0;
    std::vector<uint32_t> cycle;  // node sequence, first == last
    bool found = false;
};

// Karp's algorithm, multi-source variant (D_0 = 0 everywhere), so the global
// minimum mean cycle is found without reachability assumptions. O(n*m) time,
// O(n^2) table. found == false iff the digraph is acyclic.
MeanCycle min_mean_cycle(const Digraph& g);

}  // namespace graphkam
