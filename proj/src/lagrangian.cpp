#include "graphkam/lagrangian.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace graphkam {

namespace {
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}
}  // namespace

std::vector<std::string> compatibility_violations(const GraphLagrangian& gl) {
    std::vector<std::string> out;
    const MetricGraph& g = *gl.graph;
    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        const auto& inc = g.incident(v);
        if (inc.empty()) continue;
        auto rest_value = [&](std::pair<uint32_t, int> ee) {
            double s = ee.second == 0 ? 0.0 : g.edge(ee.first).length;
            return lagrangian_eval(gl, ee.first, s, 0.0);
        };
        const double ref = rest_value(inc.front());
        for (size_t i = 1; i < inc.size(); ++i) {
            double val = rest_value(inc[i]);
            if (std::abs(val - ref) > 1e-9) {
                out.push_back("L mismatch at vertex " + g.vertex_name(v) +
                              ": " + num(ref) + " vs " + num(val));
                break;
            }
        }
    }
    return out;
}

double lagrangian_eval(const GraphLagrangian& gl, uint32_t edge, double s,
                       double v) {
    const EdgeLagrangian& el = gl.edges[edge];
    const double tau = s / gl.graph->edge(edge).length;
    return 0.5 * el.kappa * v * v - el.potential.eval(tau);
}

double lagrangian_velocity_gradient(const GraphLagrangian& gl, uint32_t edge,
                                    double s, double v) {
    (void)s;
    return gl.edges[edge].kappa * v;
}

HamiltonianValue hamiltonian_eval(const GraphLagrangian& gl, uint32_t edge,
                                  double s, double p, Cone cone) {
    const EdgeLagrangian& el = gl.edges[edge];
    const double len = gl.graph->edge(edge).length;
    const double u = el.potential.eval(s / len);
    // Unconstrained maximizer of -p z - kappa/2 z^2 + U.
    double z = -p / el.kappa;
    if (cone == Cone::IncomingOrZero) {
        if (s == 0.0) {
            z = std::max(z, 0.0);
        } else if (s == len) {
            z = std::min(z, 0.0);
        } else {
            throw std::invalid_argument(
                "IncomingOrZero cone requires a point at an edge end");
        }
    }
    return {-p * z - 0.5 * el.kappa * z * z + u, z};
}

SymmetryReport check_symmetric_at_vertices(const GraphLagrangian& gl,
                                           double tol) {
    SymmetryReport rep;
    const MetricGraph& g = *gl.graph;
    const double speeds[] = {0.5, 1.0, 2.0};
    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        const auto& inc = g.incident(v);
        auto value = [&](std::pair<uint32_t, int> ee, double z) {
            double s = ee.second == 0 ? 0.0 : g.edge(ee.first).length;
            return lagrangian_eval(gl, ee.first, s, z);
        };
        for (double z : speeds) {
            const double ref = value(inc.front(), z);
            for (const auto& ee : inc) {
                for (double signed_z : {z, -z}) {
                    double dev = std::abs(value(ee, signed_z) - ref);
                    if (dev > rep.max_deviation) {
                        rep.max_deviation = dev;
                        if (dev > tol && rep.detail.empty())
                            rep.detail = "vertex " + g.vertex_name(v) +
                                         ", edge " + g.edge(ee.first).name +
                                         ", |z|=" + num(z);
                    }
                }
            }
        }
    }
    rep.symmetric = rep.max_deviation <= tol;
    return rep;
}

}  // namespace graphkam
