#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphkam/metric_graph.hpp"

namespace graphkam {

// Polynomial in the normalized arc coordinate tau = s / length.
struct Polynomial {
    std::vector<double> coeffs;  // c0 + c1*tau + c2*tau^2 + ...

    double eval(double tau) const {
        double acc = 0.0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * tau + coeffs[i];
        return acc;
    }
    double derivative(double tau) const {
        double acc = 0.0;
        for (size_t i = coeffs.size(); i-- > 1;)
            acc = acc * tau + coeffs[i] * static_cast<double>(i);
        return acc;
    }
};

// Mechanical Lagrangian on one edge: L(s, v) = kappa/2 v^2 - U(s/length).
struct EdgeLagrangian {
    double kappa = 1.0;
    Polynomial potential;
};

struct GraphLagrangian {
    const MetricGraph* graph = nullptr;
    std::vector<EdgeLagrangian> edges;  // indexed like graph edges

    double potential_at(uint32_t e, double s) const {
        return edges[e].potential.eval(s / graph->edge(e).length);
    }
};

// Vertex compatibility: L_j(v, 0) must agree across the edges incident to
// each vertex (tolerance 1e-9). Violation messages look like
// "L mismatch at vertex a: 0 vs -1".
std::vector<std::string> compatibility_violations(const GraphLagrangian& gl);

double lagrangian_eval(const GraphLagrangian& gl, uint32_t edge, double s,
                       double v);
// dL/dv at (edge, s, v).
double lagrangian_velocity_gradient(const GraphLagrangian& gl, uint32_t edge,
                                    double s, double v);

enum class Cone {
    FullLine,        // sup over all velocities
    IncomingOrZero,  // at an edge end: velocities pointing into the edge
};

struct HamiltonianValue {
    double value;
    double maximizer;  // argmax velocity
};

// H(edge, s, p) = sup over admissible z of (-p z - L(edge, s, z)).
// IncomingOrZero requires s at an edge end (z >= 0 at end 0, z <= 0 at
// end 1); closed form for the mechanical family either way.
HamiltonianValue hamiltonian_eval(const GraphLagrangian& gl, uint32_t edge,
                                  double s, double p, Cone cone);

struct SymmetryReport {
    bool symmetric = true;
    double max_deviation = 0.0;
    std::string detail;  // first offending vertex / velocity, if any
};

// Checks L_j(v, z) = lambda_v(|z|) at every vertex: incident edges agree and
// each is even in z, sampled at |z| in {0.5, 1, 2}. Mechanical families with
// equal kappa pass; this is what makes the vertex Hamiltonian eikonal.
SymmetryReport check_symmetric_at_vertices(const GraphLagrangian& gl,
                                           double tol = 1e-9);

}  // namespace graphkam
