#include "graphkam/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace graphkam {

std::vector<Violation> validate_graph(const GraphDef& def) {
    std::vector<Violation> out;
    auto err = [&](std::string m) {
        out.push_back({Violation::Severity::Error, std::move(m)});
    };
    auto warn = [&](std::string m) {
        out.push_back({Violation::Severity::Warning, std::move(m)});
    };

    std::set<std::string> vnames;
    for (const auto& v : def.vertices) {
        if (v.empty()) err("vertex with empty name");
        if (!vnames.insert(v).second) err("duplicate vertex name: " + v);
    }
    if (vnames.empty()) err("graph has no vertices");

    std::set<std::string> enames;
    std::map<std::string, int> degree;
    for (const auto& e : def.edges) {
        if (e.name.empty()) err("edge with empty name");
        if (!enames.insert(e.name).second) err("duplicate edge name: " + e.name);
        for (const auto* v : {&e.v0, &e.v1}) {
            if (!vnames.count(*v))
                err("edge " + e.name + ": dangling endpoint " + *v);
        }
        if (!(e.length > 0.0) || !std::isfinite(e.length)) {
            std::ostringstream os;
            os << "edge " << e.name << ": non-positive length " << e.length;
            err(os.str());
        }
        degree[e.v0]++;
        degree[e.v1] += (e.v0 == e.v1) ? 0 : 1;
        if (e.v0 == e.v1) degree[e.v0]++;  // self-loop counts both ends
    }
    if (def.edges.empty()) err("graph has no edges");

    // Connectivity over declared vertices (only meaningful without errors
    // so far, but cheap enough to attempt anyway).
    if (!vnames.empty() && !def.edges.empty()) {
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& e : def.edges) {
            if (vnames.count(e.v0) && vnames.count(e.v1)) {
                adj[e.v0].push_back(e.v1);
                adj[e.v1].push_back(e.v0);
            }
        }
        std::set<std::string> seen;
        std::vector<std::string> stack{*vnames.begin()};
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second) continue;
            for (const auto& w : adj[v]) stack.push_back(w);
        }
        for (const auto& v : vnames) {
            if (!seen.count(v))
                err("vertex " + v + " disconnected from " + *vnames.begin());
        }
    }

    for (const auto& v : def.vertices) {
        auto it = degree.find(v);
        if (it != degree.end() && it->second == 1)
            warn("vertex " + v + " has degree 1");
        if (it == degree.end())
            err("vertex " + v + " has no incident edges");
    }
    return out;
}

uint32_t MetricGraph::vertex_index(const std::string& name) const {
    for (uint32_t i = 0; i < vertex_names_.size(); ++i)
        if (vertex_names_[i] == name) return i;
    throw std::invalid_argument("unknown vertex: " + name);
}

uint32_t MetricGraph::edge_index(const std::string& name) const {
    for (uint32_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].name == name) return i;
    throw std::invalid_argument("unknown edge: " + name);
}

MetricGraph MetricGraph::build(const GraphDef& def) {
    auto violations = validate_graph(def);
    std::string msg;
    for (const auto& v : violations)
        if (v.severity == Violation::Severity::Error)
            msg += (msg.empty() ? "" : "; ") + v.message;
    if (!msg.empty()) throw std::invalid_argument("invalid graph: " + msg);

    MetricGraph g;
    g.vertex_names_ = def.vertices;
    std::sort(g.vertex_names_.begin(), g.vertex_names_.end());

    std::vector<EdgeSpec> es = def.edges;
    std::sort(es.begin(), es.end(),
              [](const EdgeSpec& a, const EdgeSpec& b) { return a.name < b.name; });
    for (const auto& e : es) {
        Edge edge;
        edge.name = e.name;
        edge.v0 = g.vertex_index(e.v0);
        edge.v1 = g.vertex_index(e.v1);
        edge.length = e.length;
        g.edges_.push_back(std::move(edge));
    }

    g.incident_.resize(g.vertex_names_.size());
    for (uint32_t ei = 0; ei < g.edges_.size(); ++ei) {
        g.incident_[g.edges_[ei].v0].push_back({ei, 0});
        g.incident_[g.edges_[ei].v1].push_back({ei, 1});
    }
    // Edges are name-sorted, so (edge index, end) order is already the
    // (edge name, end) order.
    for (auto& inc : g.incident_)
        std::sort(inc.begin(), inc.end());

    g.vertex_rep_.resize(g.vertex_names_.size());
    for (uint32_t v = 0; v < g.vertex_names_.size(); ++v) {
        auto [e, end] = g.incident_[v].front();
        g.vertex_rep_[v] = {e, end == 0 ? 0.0 : g.edges_[e].length};
    }

    g.build_shortest_paths();
    return g;
}

void MetricGraph::build_shortest_paths() {
    const size_t n = vertex_names_.size();
    const double inf = std::numeric_limits<double>::infinity();
    vdist_.assign(n * n, inf);
    parent_.assign(n * n, Parent{});

    for (uint32_t src = 0; src < n; ++src) {
        double* dist = &vdist_[src * n];
        Parent* par = &parent_[src * n];
        dist[src] = 0.0;
        std::vector<char> done(n, 0);
        using Item = std::pair<double, uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, src});
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (done[v]) continue;
            done[v] = 1;
            for (auto [e, end] : incident_[v]) {
                uint32_t w = endpoint(e, 1 - end);
                double cand = d + edges_[e].length;
                if (cand < dist[w]) {
                    dist[w] = cand;
                    par[w] = {v, e};
                    pq.push({cand, w});
                } else if (cand == dist[w] && par[w].edge != UINT32_MAX &&
                           !done[w]) {
                    // Exact tie: keep the lexicographically smaller arc so
                    // reconstruction is deterministic.
                    if (edges_[e].name < edges_[par[w].edge].name)
                        par[w] = {v, e};
                }
            }
        }
    }
}

bool MetricGraph::is_vertex_point(const GraphPoint& p) const {
    return p.s == 0.0 || p.s == edges_[p.edge].length;
}

uint32_t MetricGraph::vertex_at(const GraphPoint& p) const {
    if (p.s == 0.0) return edges_[p.edge].v0;
    if (p.s == edges_[p.edge].length) return edges_[p.edge].v1;
    throw std::invalid_argument("point is not at a vertex");
}

GraphPoint MetricGraph::canonicalize(GraphPoint p) const {
    if (p.edge >= edges_.size())
        throw std::invalid_argument("canonicalize: edge index out of range");
    const double len = edges_[p.edge].length;
    const double snap = 1e-9 * len;
    if (p.s < 0.0) {
        if (p.s < -snap)
            throw std::invalid_argument("canonicalize: offset below 0");
        p.s = 0.0;
    }
    if (p.s > len) {
        if (p.s > len + snap)
            throw std::invalid_argument("canonicalize: offset beyond edge length");
        p.s = len;
    }
    if (p.s == 0.0) return vertex_rep_[edges_[p.edge].v0];
    if (p.s == len) return vertex_rep_[edges_[p.edge].v1];
    return p;
}

bool MetricGraph::same_point(GraphPoint a, GraphPoint b) const {
    a = canonicalize(a);
    b = canonicalize(b);
    return a.edge == b.edge && a.s == b.s;
}

namespace {
inline double end_offset(const Edge& e, double s, int end) {
    return end == 0 ? s : e.length - s;
}
}  // namespace

double MetricGraph::distance(GraphPoint x, GraphPoint y) const {
    x = canonicalize(x);
    y = canonicalize(y);
    const Edge& ex = edges_[x.edge];
    const Edge& ey = edges_[y.edge];
    double best = std::numeric_limits<double>::infinity();
    if (x.edge == y.edge) best = std::abs(x.s - y.s);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double d = end_offset(ex, x.s, a) +
                       vertex_distance(endpoint(x.edge, a), endpoint(y.edge, b)) +
                       end_offset(ey, y.s, b);
            best = std::min(best, d);
        }
    return best;
}

void MetricGraph::append_vertex_path(uint32_t va, uint32_t vb,
                                     std::vector<PathSegment>& out) const {
    const size_t n = vertex_names_.size();
    const Parent* par = &parent_[va * n];
    std::vector<std::pair<uint32_t, int>> arcs;  // (edge, arrival end)
    uint32_t v = vb;
    while (v != va) {
        const Parent& p = par[v];
        // p.prev --edge--> v; arrival end is the end of edge at v.
        int end_at_v = (edges_[p.edge].v1 == v && edges_[p.edge].v0 == p.prev) ? 1
                       : (edges_[p.edge].v0 == v)                              ? 0
                                                                               : 1;
        arcs.push_back({p.edge, end_at_v});
        v = p.prev;
    }
    for (auto it = arcs.rbegin(); it != arcs.rend(); ++it) {
        const Edge& e = edges_[it->first];
        if (it->second == 1)
            out.push_back({it->first, 0.0, e.length});
        else
            out.push_back({it->first, e.length, 0.0});
    }
}

std::vector<PathSegment> MetricGraph::geodesic_segments(GraphPoint x,
                                                        GraphPoint y) const {
    x = canonicalize(x);
    y = canonicalize(y);
    if (x.edge == y.edge && x.s == y.s) return {};

    const Edge& ex = edges_[x.edge];
    const Edge& ey = edges_[y.edge];
    const double direct = (x.edge == y.edge)
                              ? std::abs(x.s - y.s)
                              : std::numeric_limits<double>::infinity();
    double best = direct;
    int besta = -1, bestb = -1;  // -1,-1 means direct
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double d = end_offset(ex, x.s, a) +
                       vertex_distance(endpoint(x.edge, a), endpoint(y.edge, b)) +
                       end_offset(ey, y.s, b);
            if (d < best) {
                best = d;
                besta = a;
                bestb = b;
            }
        }

    std::vector<PathSegment> segs;
    if (besta < 0) {
        segs.push_back({x.edge, x.s, y.s});
        return segs;
    }
    const double sa = besta == 0 ? 0.0 : ex.length;
    const double sb = bestb == 0 ? 0.0 : ey.length;
    if (x.s != sa) segs.push_back({x.edge, x.s, sa});
    append_vertex_path(endpoint(x.edge, besta), endpoint(y.edge, bestb), segs);
    if (y.s != sb) segs.push_back({y.edge, sb, y.s});
    return segs;
}

std::vector<GraphPoint> MetricGraph::geodesic(GraphPoint x, GraphPoint y) const {
    x = canonicalize(x);
    y = canonicalize(y);
    std::vector<GraphPoint> pts{x};
    auto segs = geodesic_segments(x, y);
    for (size_t i = 0; i + 1 < segs.size(); ++i) {
        GraphPoint junction{segs[i].edge, segs[i].s1};
        pts.push_back(canonicalize(junction));
    }
    if (!(x.edge == y.edge && x.s == y.s)) pts.push_back(y);
    return pts;
}

double MetricGraph::diameter() const {
    // Sampled at edge fifths; exact enough for the V_max and window
    // heuristics that consume it.
    std::vector<GraphPoint> pts;
    for (uint32_t e = 0; e < edges_.size(); ++e)
        for (int k = 0; k <= 5; ++k)
            pts.push_back(canonicalize({e, edges_[e].length * k / 5.0}));
    double best = 0.0;
    for (const auto& a : pts)
        for (const auto& b : pts) best = std::max(best, distance(a, b));
    return best;
}

}  // namespace graphkam
