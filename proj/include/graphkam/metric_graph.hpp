#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace graphkam {

// Connected multigraph with positive edge lengths. Self-loops and parallel
// edges are allowed. Vertices and edges are addressed by short string names
// in the construction API and by dense indices afterwards.

struct EdgeSpec {
    std::string name;
    std::string v0, v1;
    double length = 1.0;
};

struct GraphDef {
    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
};

struct Violation {
    enum class Severity { Error, Warning };
    Severity severity;
    std::string message;
};

// All structural problems in one pass: unknown endpoints, non-positive or
// non-finite lengths, duplicate names, disconnected components. Degree-1
// vertices are legal but reported as warnings. The graph is usable iff no
// Error entries are present.
std::vector<Violation> validate_graph(const GraphDef& def);

struct Edge {
    std::string name;
    uint32_t v0, v1;
    double length;
};

// Point on the graph: offset s in [0, length] along an edge chart. Points
// with s at an endpoint coincide with a vertex; canonicalize() maps them to
// the representative chart (lowest edge name, end 0 before end 1).
struct GraphPoint {
    uint32_t edge;
    double s;
};

// Oriented run along a single edge, s0 -> s1 (s0 != s1).
struct PathSegment {
    uint32_t edge;
    double s0, s1;
    double length() const { return s1 > s0 ? s1 - s0 : s0 - s1; }
};

class MetricGraph {
public:
    // Throws std::invalid_argument listing the violations if def has errors.
    static MetricGraph build(const GraphDef& def);

    size_t vertex_count() const { return vertex_names_.size(); }
    size_t edge_count() const { return edges_.size(); }
    const std::string& vertex_name(uint32_t v) const { return vertex_names_[v]; }
    const Edge& edge(uint32_t e) const { return edges_[e]; }
    uint32_t vertex_index(const std::string& name) const;  // throws if unknown
    uint32_t edge_index(const std::string& name) const;    // throws if unknown

    // (edge, end) pairs incident to v, sorted by (edge name, end).
    // A self-loop contributes both ends.
    const std::vector<std::pair<uint32_t, int>>& incident(uint32_t v) const {
        return incident_[v];
    }
    int degree(uint32_t v) const { return static_cast<int>(incident_[v].size()); }

    // Vertex of an edge end (end 0 is s=0, end 1 is s=length).
    uint32_t endpoint(uint32_t e, int end) const {
        return end == 0 ? edges_[e].v0 : edges_[e].v1;
    }

    bool is_vertex_point(const GraphPoint& p) const;
    // Vertex index of a point sitting at an edge end; throws otherwise.
    uint32_t vertex_at(const GraphPoint& p) const;
    // Representative chart of the vertex v.
    GraphPoint vertex_point(uint32_t v) const { return vertex_rep_[v]; }

    // Maps endpoint-coincident points to the vertex representative chart,
    // leaves interior points alone. Throws on unknown edge or s outside
    // [0, length] (beyond a 1e-9 relative snap).
    GraphPoint canonicalize(GraphPoint p) const;
    bool same_point(GraphPoint a, GraphPoint b) const;

    // Shortest-path (unit-speed geodesic) distance between vertices.
    double vertex_distance(uint32_t a, uint32_t b) const {
        return vdist_[a * vertex_names_.size() + b];
    }

    double distance(GraphPoint x, GraphPoint y) const;

    // Oriented edge runs of a shortest path x -> y; empty when x == y.
    // Deterministic on ties: direct intra-edge route wins, then endpoint
    // pairs in (0,0),(0,1),(1,0),(1,1) order; vertex-to-vertex legs follow
    // the Dijkstra parent tree (ties prefer the smaller (edge name, end)).
    std::vector<PathSegment> geodesic_segments(GraphPoint x, GraphPoint y) const;

    // Polyline form: x, the canonical representative of every crossed
    // vertex, y. Consecutive points share an edge up to vertex
    // identification.
    std::vector<GraphPoint> geodesic(GraphPoint x, GraphPoint y) const;

    // Largest point-to-point distance, at cell-midpoint accuracy.
    double diameter() const;

private:
    std::vector<std::string> vertex_names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<uint32_t, int>>> incident_;
    std::vector<GraphPoint> vertex_rep_;
    std::vector<double> vdist_;  // |V| x |V|
    // Dijkstra parent per (source, vertex): arc arriving at the vertex.
    struct Parent {
        uint32_t prev = UINT32_MAX;
        uint32_t edge = UINT32_MAX;
    };
    std::vector<Parent> parent_;  // |V| x |V|

    void build_shortest_paths();
    // Vertex legs va -> vb of the parent tree rooted at va, as segments.
    void append_vertex_path(uint32_t va, uint32_t vb,
                            std::vector<PathSegment>& out) const;
};

}  // namespace graphkam
