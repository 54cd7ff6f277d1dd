#include "graphkam/spec_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "graphkam/lax_oleinik.hpp"
#include "graphkam/transition.hpp"
#include "graphkam/viscosity.hpp"

namespace graphkam {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

ParsedSystem parse_spec(const std::string& text) {
    ParsedSystem ps;
    GraphDef def;
    std::map<std::string, EdgeLagrangian> lag_of;  // by edge name
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        ps.errors.push_back("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::vector<std::string> tok = tokens(raw);
        if (tok.empty()) continue;
        if (tok[0] == "vertex") {
            if (tok.size() != 2) {
                fail("vertex takes exactly one name");
                continue;
            }
            def.vertices.push_back(tok[1]);
        } else if (tok[0] == "edge") {
            if (tok.size() < 4) {
                fail("edge needs a name and two endpoint vertices");
                continue;
            }
            EdgeSpec es;
            es.name = tok[1];
            es.v0 = tok[2];
            es.v1 = tok[3];
            EdgeLagrangian el;
            el.potential.coeffs = {0.0};
            bool have_len = false, bad = false;
            for (size_t i = 4; i < tok.size() && !bad; ++i) {
                size_t eq = tok[i].find('=');
                if (eq == std::string::npos) {
                    fail("expected key=value, got '" + tok[i] + "'");
                    bad = true;
                    break;
                }
                std::string key = tok[i].substr(0, eq);
                std::string val = tok[i].substr(eq + 1);
                double d = 0.0;
                if (key == "length") {
                    if (!parse_double(val, d) || !(d > 0.0) || !std::isfinite(d)) {
                        fail("length must be a positive number, got '" + val + "'");
                        bad = true;
                    } else {
                        es.length = d;
                        have_len = true;
                    }
                } else if (key == "kinetic") {
                    if (!parse_double(val, d) || !(d > 0.0) || !std::isfinite(d)) {
                        fail("kinetic must be a positive number, got '" + val + "'");
                        bad = true;
                    } else {
                        el.kappa = d;
                    }
                } else if (key == "potential") {
                    if (val.rfind("poly:", 0) != 0) {
                        fail("potential must be poly:c0,c1,...");
                        bad = true;
                        break;
                    }
                    std::vector<double> coeffs;
                    for (const std::string& piece : split(val.substr(5), ',')) {
                        if (!parse_double(piece, d) || !std::isfinite(d)) {
                            fail("bad potential coefficient '" + piece + "'");
                            bad = true;
                            break;
                        }
                        coeffs.push_back(d);
                    }
                    if (!bad && coeffs.empty()) {
                        fail("potential needs at least one coefficient");
                        bad = true;
                    }
                    if (!bad) el.potential.coeffs = std::move(coeffs);
                } else {
                    fail("unknown field '" + key + "'");
                    bad = true;
                }
            }
            if (!bad && !have_len) {
                fail("edge '" + es.name + "' is missing length=");
                bad = true;
            }
            if (!bad) {
                def.edges.push_back(es);
                lag_of[es.name] = std::move(el);
            }
        } else {
            fail("unknown directive '" + tok[0] + "'");
        }
    }
    for (const Violation& v : validate_graph(def)) {
        if (v.severity == Violation::Severity::Error)
            ps.errors.push_back(v.message);
        else
            ps.warnings.push_back(v.message);
    }
    if (!ps.errors.empty()) return ps;
    ps.graph = std::make_unique<MetricGraph>(MetricGraph::build(def));
    ps.lagrangian.graph = ps.graph.get();
    ps.lagrangian.edges.resize(ps.graph->edge_count());
    for (uint32_t e = 0; e < ps.graph->edge_count(); ++e)
        ps.lagrangian.edges[e] = lag_of.at(ps.graph->edge(e).name);
    for (std::string& msg : compatibility_violations(ps.lagrangian))
        ps.errors.push_back(std::move(msg));
    return ps;
}

ParsedSystem parse_spec_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        ParsedSystem ps;
        ps.errors.push_back("cannot read " + path);
        return ps;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_spec(buf.str());
}

std::string emit_spec(const MetricGraph& g, const GraphLagrangian& gl) {
    std::ostringstream out;
    for (uint32_t v = 0; v < g.vertex_count(); ++v)
        out << "vertex " << g.vertex_name(v) << "\n";
    for (uint32_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        const EdgeLagrangian& el = gl.edges[e];
        out << "edge " << ed.name << " " << g.vertex_name(ed.v0) << " "
            << g.vertex_name(ed.v1) << " length=" << fmt("%.17g", ed.length)
            << " kinetic=" << fmt("%.17g", el.kappa) << " potential=poly:";
        if (el.potential.coeffs.empty()) {
            out << "0";
        } else {
            for (size_t i = 0; i < el.potential.coeffs.size(); ++i) {
                if (i) out << ",";
                out << fmt("%.17g", el.potential.coeffs[i]);
            }
        }
        out << "\n";
    }
    return out.str();
}

std::vector<CsvRow> csv_rows(const Grid& grid) {
    const MetricGraph& g = *grid.graph;
    std::vector<CsvRow> rows;
    rows.reserve(grid.state_count);
    for (uint32_t v = 0; v < g.vertex_count(); ++v) {
        GraphPoint p = g.vertex_point(v);
        rows.push_back({p.edge, p.s, grid.vertex_state[v]});
    }
    for (uint32_t e = 0; e < g.edge_count(); ++e)
        for (uint32_t k = 1; k < grid.edges[e].cells; ++k)
            rows.push_back({e, k * grid.edges[e].dx, grid.node(e, k)});
    // edge indices are name-sorted, so (edge, s) is the canonical order
    std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
        if (a.edge != b.edge) return a.edge < b.edge;
        return a.s < b.s;
    });
    return rows;
}

void write_grid_csv(const std::string& path, const Grid& grid,
                    const std::vector<double>& values) {
    if (values.size() != grid.state_count)
        throw std::logic_error("write_grid_csv: size mismatch");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "edge_id,s,value\n";
    for (const CsvRow& r : csv_rows(grid))
        f << grid.graph->edge(r.edge).name << "," << fmt("%.9g", r.s) << ","
          << fmt("%.12g", values[r.state]) << "\n";
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<double> read_grid_csv(const std::string& path, const Grid& grid) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::vector<double> out(grid.state_count, GridFunction::sentinel());
    std::string line;
    if (!std::getline(f, line) || split(line, ',').size() != 3)
        throw std::runtime_error(path + ": expected header edge_id,s,value");
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        auto fail = [&](const std::string& msg) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": " + msg);
        };
        if (cells.size() != 3) fail("expected edge_id,s,value");
        double s = 0.0, value = 0.0;
        if (!parse_double(cells[1], s)) fail("bad offset '" + cells[1] + "'");
        if (!parse_double(cells[2], value))
            fail("bad value '" + cells[2] + "'");
        uint32_t e = 0;
        try {
            e = grid.graph->edge_index(cells[0]);
        } catch (const std::exception&) {
            fail("unknown edge '" + cells[0] + "'");
        }
        GraphPoint p{e, s};
        try {
            p = grid.graph->canonicalize(p);
        } catch (const std::exception&) {
            fail("offset " + cells[1] + " outside edge " + cells[0]);
        }
        StateId sid = grid.state_near(p);
        if (grid.graph->distance(grid.point_of(sid), p) > 1e-6 * (1.0 + grid.min_dx()))
            fail("point " + cells[0] + ":" + cells[1] + " is not a grid state");
        out[sid] = value;
    }
    return out;
}

void write_matrix_csv(const std::string& path, const Grid& grid,
                      const BarrierMatrix& m) {
    if (m.targets != grid.state_count ||
        m.values.size() != m.sources.size() * m.targets)
        throw std::logic_error("write_matrix_csv: shape mismatch");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "src_edge,src_s,dst_edge,dst_s,value\n";
    std::vector<CsvRow> rows = csv_rows(grid);
    for (size_t r = 0; r < m.sources.size(); ++r) {
        GraphPoint src = grid.point_of(m.sources[r]);
        const std::string& src_name = grid.graph->edge(src.edge).name;
        std::string prefix = src_name + "," + fmt("%.9g", src.s) + ",";
        for (const CsvRow& row : rows)
            f << prefix << grid.graph->edge(row.edge).name << ","
              << fmt("%.9g", row.s) << "," << fmt("%.12g", m.at(r, row.state))
              << "\n";
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

void write_gap_csv(const std::string& path, const std::vector<double>& times,
                   const std::vector<double>& gaps) {
    if (times.size() != gaps.size())
        throw std::logic_error("write_gap_csv: size mismatch");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "t,gap\n";
    for (size_t i = 0; i < times.size(); ++i)
        f << fmt("%.9g", times[i]) << "," << fmt("%.12g", gaps[i]) << "\n";
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<double> eval_init(const std::string& expr, const Grid& grid) {
    auto two_params = [&](const std::string& body, double& a, double& b) {
        std::vector<std::string> parts = split(body, ',');
        if (parts.size() != 2 || !parse_double(parts[0], a) ||
            !parse_double(parts[1], b))
            throw std::runtime_error("expected two numbers, got '" + body + "'");
    };
    if (expr.rfind("const:", 0) == 0) {
        double v = 0.0;
        if (!parse_double(expr.substr(6), v))
            throw std::runtime_error("bad constant in '" + expr + "'");
        return std::vector<double>(grid.state_count, v);
    }
    if (expr.rfind("linear:", 0) == 0 || expr.rfind("cos:", 0) == 0) {
        bool linear = expr[0] == 'l';
        double a = 0.0, b = 0.0;
        two_params(expr.substr(expr.find(':') + 1), a, b);
        std::vector<double> out(grid.state_count);
        for (StateId x = 0; x < grid.state_count; ++x) {
            double s = grid.point_of(x).s;
            out[x] = linear ? a * s + b : std::cos(a * s + b);
        }
        return out;
    }
    return read_grid_csv(expr, grid);
}

StateId parse_source_point(const std::string& text, const Grid& grid,
                           double* snap_distance) {
    size_t colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw std::runtime_error("source must look like edge:offset, got '" +
                                 text + "'");
    double s = 0.0;
    if (!parse_double(text.substr(colon + 1), s))
        throw std::runtime_error("bad offset in '" + text + "'");
    GraphPoint p{grid.graph->edge_index(text.substr(0, colon)), s};
    p = grid.graph->canonicalize(p);
    StateId sid = grid.state_near(p);
    if (snap_distance)
        *snap_distance = grid.graph->distance(grid.point_of(sid), p);
    return sid;
}

namespace {

struct Common {
    std::string spec;
    double dx = 1.0 / 64;
    double dt = 0.0;    // 0: 16 * min dx / vmax
    double vmax = 0.0;  // 0: max(1, 2 * diameter)
    double tol = 1e-2;
    uint64_t seed = 0;  // accepted for workflow compatibility; all
                        // computations here are deterministic
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("spec", c.spec, "graph description file")->required();
    sub->add_option("--dx", c.dx, "target grid spacing (default 1/64)");
    sub->add_option("--dt", c.dt, "time step (default 16*dx/vmax)");
    sub->add_option("--vmax", c.vmax,
                    "speed bound per step (default max(1, 2*diameter))");
    sub->add_option("--tol", c.tol, "acceptance tolerance (default 1e-2)");
    sub->add_option("--seed", c.seed, "accepted and ignored; runs are deterministic");
}

struct Session {
    ParsedSystem sys;
    Grid grid;
    TransitionGraph tg;
};

// 0 on success, 1 with messages on err otherwise. The transition build is
// skipped when with_tg is false (validate only needs the parse).
int open_session(const Common& c, bool with_tg, Session& s, std::ostream& err) {
    s.sys = parse_spec_file(c.spec);
    for (const std::string& w : s.sys.warnings) err << "warning: " << w << "\n";
    if (!s.sys.ok()) {
        for (const std::string& e : s.sys.errors) err << "error: " << e << "\n";
        return 1;
    }
    s.grid = build_grid(*s.sys.graph, c.dx);
    if (!with_tg) return 0;
    double vmax = c.vmax > 0 ? c.vmax : std::max(1.0, 2.0 * s.sys.graph->diameter());
    double dt = c.dt > 0 ? c.dt : 16.0 * s.grid.min_dx() / vmax;
    s.tg = build_transitions(s.grid, s.sys.lagrangian, dt, vmax);
    err << "grid: " << s.grid.state_count << " states, " << s.tg.arc_count()
        << " arcs, dt=" << fmt("%.6g", dt) << ", vmax=" << fmt("%.6g", vmax)
        << "\n";
    return 0;
}

int run_validate(const Common& c, std::ostream& out, std::ostream& err) {
    ParsedSystem sys = parse_spec_file(c.spec);
    for (const std::string& w : sys.warnings) out << "warning: " << w << "\n";
    for (const std::string& e : sys.errors) out << "error: " << e << "\n";
    if (!sys.ok()) {
        out << "invalid\n";
        return 1;
    }
    SymmetryReport sym = check_symmetric_at_vertices(sys.lagrangian);
    out << "vertices: " << sys.graph->vertex_count()
        << ", edges: " << sys.graph->edge_count()
        << ", diameter: " << fmt("%.6g", sys.graph->diameter()) << "\n";
    out << "vertex-symmetric: " << (sym.symmetric ? "yes" : "no") << "\n";
    if (!sym.symmetric) err << "warning: " << sym.detail << "\n";
    out << "ok\n";
    return 0;
}

int run_critical(const Common& c, uint32_t steps, std::ostream& out,
                 std::ostream& err) {
    Session s;
    if (int rc = open_session(c, true, s, err)) return rc;
    CriticalValue mmc = critical_value_mmc(s.tg);
    CriticalValue slope = critical_value_slope(s.tg, steps);
    size_t cycle_arcs = mmc.cycle.empty() ? 0 : mmc.cycle.size() - 1;
    out << "min_mean_cycle  c = " << fmt("%.12g", mmc.c) << "  (cycle of "
        << cycle_arcs << " arcs)\n";
    out << "long_time_slope c = " << fmt("%.12g", slope.c)
        << "  (fit residual " << fmt("%.3g", slope.fit_residual) << ")\n";
    out << "disagreement = " << fmt("%.3g", std::fabs(mmc.c - slope.c)) << "\n";
    if (!slope.slope_ok)
        err << "warning: slope fit residual above threshold; raise --steps\n";
    return 0;
}

int run_potential(const Common& c, const std::string& source,
                  const std::string& out_path, std::ostream& out,
                  std::ostream& err) {
    Session s;
    if (int rc = open_session(c, true, s, err)) return rc;
    double snap = 0.0;
    StateId src = parse_source_point(source, s.grid, &snap);
    if (snap > 0) err << "note: source snapped by " << fmt("%.3g", snap) << "\n";
    double c_val = critical_value_mmc(s.tg).c;
    BarrierMatrix m = mane_potential(s.tg, c_val, {src});
    write_matrix_csv(out_path, s.grid, m);
    out << "c = " << fmt("%.12g", c_val) << "\n";
    out << "wrote " << out_path << "\n";
    if (m.negative_cycle) {
        err << "error: negative cycle at the critical level (excess "
            << fmt("%.3g", m.negative_cycle_excess) << " > "
            << fmt("%.3g", m.eps_neg) << ")\n";
        return 2;
    }
    return 0;
}

int run_barrier(const Common& c, const std::string& source, uint32_t n_min,
                uint32_t n_max, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
    Session s;
    if (int rc = open_session(c, true, s, err)) return rc;
    double snap = 0.0;
    StateId src = parse_source_point(source, s.grid, &snap);
    if (snap > 0) err << "note: source snapped by " << fmt("%.3g", snap) << "\n";
    double c_val = critical_value_mmc(s.tg).c;
    PeierlsWindow w = default_window(s.tg);
    if (n_min > 0) w.n_min = n_min;
    if (n_max > 0) w.n_max = n_max;
    if (w.n_max <= w.n_min) {
        err << "error: window needs n_max > n_min\n";
        return 1;
    }
    BarrierMatrix m = peierls_barrier(s.tg, c_val, {src}, w.n_min, w.n_max);
    write_matrix_csv(out_path, s.grid, m);
    out << "c = " << fmt("%.12g", c_val) << ", window = [" << m.n_min << ", "
        << m.n_max << "]\n";
    out << "wrote " << out_path << "\n";
    if (m.window_boundary_hit) {
        err << "error: minimum still moving at n_max; widen the window\n";
        return 2;
    }
    return 0;
}

int run_aubry(const Common& c, double tol_aubry, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
    Session s;
    if (int rc = open_session(c, true, s, err)) return rc;
    CriticalValue mmc = critical_value_mmc(s.tg);
    double tol = tol_aubry;
    if (!(tol > 0)) {
        CriticalValue slope = critical_value_slope(s.tg, 256);
        tol = default_aubry_tol(std::fabs(mmc.c - slope.c));
    }
    PeierlsWindow w = default_window(s.tg);
    BarrierMatrix h =
        peierls_barrier(s.tg, mmc.c, all_states(s.grid), w.n_min, w.n_max);
    AubrySet a = aubry_set(h, tol);
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << "edge_id,s,value\n";
    for (const CsvRow& r : csv_rows(s.grid)) {
        if (!std::binary_search(a.members.begin(), a.members.end(), r.state))
            continue;
        f << s.grid.graph->edge(r.edge).name << "," << fmt("%.9g", r.s) << ","
          << fmt("%.12g", a.diagonal[r.state]) << "\n";
    }
    out << "c = " << fmt("%.12g", mmc.c) << ", tol = " << fmt("%.6g", tol)
        << "\n";
    out << "members: " << a.members.size() << " of " << s.grid.state_count
        << " states\n";
    out << "wrote " << out_path << "\n";
    if (h.window_boundary_hit) {
        err << "error: minimum still moving at n_max; widen the window\n";
        return 2;
    }
    if (a.members.empty()) {
        err << "error: " << a.note << "\n";
        return 2;
    }
    return 0;
}

int run_evolve(const Common& c, const std::string& init, double tmax,
               double stop_tol, const std::string& out_path,
               const std::string& gap_path, const std::string& frames_prefix,
               uint32_t frame_stride, std::ostream& out, std::ostream& err) {
    Session s;
    if (int rc = open_session(c, true, s, err)) return rc;
    std::vector<double> u0 = eval_init(init, s.grid);
    double c_val = critical_value_mmc(s.tg).c;
    EvolveOptions opt;
    opt.max_steps = static_cast<uint32_t>(
        std::max<long long>(1, std::llround(tmax / s.tg.dt)));
    opt.c = c_val;
    opt.stop_tol = stop_tol;
    if (!frames_prefix.empty())
        opt.frame_stride =
            frame_stride > 0 ? frame_stride : std::max(1u, opt.max_steps / 8);
    EvolveResult res = lo_evolve(s.tg, u0, opt);
    write_grid_csv(out_path, s.grid, res.u_corrected);
    std::vector<double> times(res.steps);
    for (uint32_t k = 0; k < res.steps; ++k) times[k] = (k + 1) * s.tg.dt;
    write_gap_csv(gap_path, times, res.gap);
    for (size_t i = 0; i < res.frames.size(); ++i) {
        char name[512];
        std::snprintf(name, sizeof name, "%s%04u.csv", frames_prefix.c_str(),
                      res.frame_steps[i]);
        write_grid_csv(name, s.grid, res.frames[i]);
    }
    out << "c = " << fmt("%.12g", c_val) << ", steps = " << res.steps
        << (res.converged ? " (converged)" : "") << "\n";
    out << "final corrected gap = "
        << fmt("%.6g", res.gap.empty() ? 0.0 : res.gap.back()) << "\n";
    out << "wrote " << out_path << " and " << gap_path << "\n";
    return 0;
}

int run_solve(const Common& c, const std::string& init, double tol_aubry,
              const std::string& out_path, const std::string& rf_path,
              std::ostream& out, std::ostream& err) {
    Session s;
    if (int rc = open_session(c, true, s, err)) return rc;
    CriticalValue mmc = critical_value_mmc(s.tg);
    CriticalValue slope = critical_value_slope(s.tg, 256);
    double tol = tol_aubry > 0
                     ? tol_aubry
                     : default_aubry_tol(std::fabs(mmc.c - slope.c));
    PeierlsWindow w = default_window(s.tg);
    BarrierMatrix h =
        peierls_barrier(s.tg, mmc.c, all_states(s.grid), w.n_min, w.n_max);
    AubrySet a = aubry_set(h, tol);
    std::vector<double> u0 = eval_init(init, s.grid);
    WeakKamSolution sol = weak_kam_solution(u0, h, a);
    write_grid_csv(out_path, s.grid, sol.v);
    if (!rf_path.empty()) write_grid_csv(rf_path, s.grid, sol.v_rf);
    out << "c = " << fmt("%.12g", mmc.c) << " (slope method "
        << fmt("%.12g", slope.c) << ")\n";
    out << "aubry members: " << a.members.size() << " (tol "
        << fmt("%.6g", tol) << ")\n";
    out << "representation max diff = " << fmt("%.6g", sol.max_diff) << "\n";
    out << "wrote " << out_path << "\n";
    if (h.window_boundary_hit) {
        err << "error: minimum still moving at n_max; widen the window\n";
        return 2;
    }
    if (a.members.empty()) {
        err << "error: " << a.note << "\n";
        return 2;
    }
    return 0;
}

int run_check(const Common& c, const std::string& solution_path, double c_flag,
              bool have_c, double slope_tol, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
    Session s;
    if (int rc = open_session(c, true, s, err)) return rc;
    std::vector<double> u = read_grid_csv(solution_path, s.grid);
    double c_val = have_c ? c_flag : critical_value_mmc(s.tg).c;
    double st = slope_tol > 0 ? slope_tol : default_slope_tol(s.grid);
    ViscosityReport rep =
        check_stationary(u, s.sys.lagrangian, s.grid, c_val, c.tol, st);
    out << "c = " << fmt("%.12g", c_val) << ", tol = " << fmt("%.6g", c.tol)
        << ", slope_tol = " << fmt("%.6g", st) << "\n";
    out << "states: " << rep.count_differentiable << " differentiable, "
        << rep.count_concave << " concave, " << rep.count_convex
        << " convex, " << rep.count_vertex << " vertex\n";
    out << "subsolution residual = " << fmt("%.6g", rep.sub_residual) << "\n";
    out << "supersolution residual = " << fmt("%.6g", rep.super_residual)
        << "\n";
    if (!out_path.empty()) {
        std::vector<double> worst(s.grid.state_count);
        for (StateId x = 0; x < s.grid.state_count; ++x)
            worst[x] = std::max(rep.sub_violation[x], rep.super_violation[x]);
        write_grid_csv(out_path, s.grid, worst);
        out << "wrote " << out_path << "\n";
    }
    out << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"weak KAM solver on metric graphs"};
    app.require_subcommand(1);

    Common common;
    int rc = 0;

    CLI::App* validate =
        app.add_subcommand("validate", "parse and check a graph description");
    add_common(validate, common);
    validate->callback([&] { rc = run_validate(common, out, err); });

    CLI::App* critical = app.add_subcommand(
        "critical", "critical value by min-mean-cycle and long-time slope");
    add_common(critical, common);
    uint32_t critical_steps = 256;
    critical->add_option("--steps", critical_steps,
                         "evolution length for the slope fit");
    critical->callback(
        [&] { rc = run_critical(common, critical_steps, out, err); });

    CLI::App* potential = app.add_subcommand(
        "potential", "action potential from one source (matrix CSV)");
    add_common(potential, common);
    std::string pot_source, pot_out = "potential.csv";
    potential->add_option("--source", pot_source, "source point edge:offset")
        ->required();
    potential->add_option("--out", pot_out, "output CSV path");
    potential->callback(
        [&] { rc = run_potential(common, pot_source, pot_out, out, err); });

    CLI::App* barrier = app.add_subcommand(
        "barrier", "pair barrier from one source (windowed minimum)");
    add_common(barrier, common);
    std::string bar_source, bar_out = "barrier.csv";
    uint32_t bar_nmin = 0, bar_nmax = 0;
    barrier->add_option("--source", bar_source, "source point edge:offset")
        ->required();
    barrier->add_option("--out", bar_out, "output CSV path");
    barrier->add_option("--nmin", bar_nmin, "window start (default auto)");
    barrier->add_option("--nmax", bar_nmax, "window end (default auto)");
    barrier->callback([&] {
        rc = run_barrier(common, bar_source, bar_nmin, bar_nmax, bar_out, out,
                         err);
    });

    CLI::App* aubry = app.add_subcommand(
        "aubry", "states with vanishing self barrier (projected Aubry set)");
    add_common(aubry, common);
    double aubry_tol = 0.0;
    std::string aubry_out = "aubry.csv";
    aubry->add_option("--tol-aubry", aubry_tol,
                      "membership threshold (default from c disagreement)");
    aubry->add_option("--out", aubry_out, "members CSV path");
    aubry->callback(
        [&] { rc = run_aubry(common, aubry_tol, aubry_out, out, err); });

    CLI::App* evolve =
        app.add_subcommand("evolve", "run the value iteration from given data");
    add_common(evolve, common);
    std::string ev_init, ev_out = "evolve.csv", ev_gap = "gap.csv", ev_frames;
    double ev_tmax = 16.0, ev_stop = 0.0;
    uint32_t ev_stride = 0;
    evolve->add_option("--init", ev_init,
                       "initial data: const:v, linear:a,b, cos:a,b, or CSV")
        ->required();
    evolve->add_option("--tmax", ev_tmax, "evolution horizon (default 16)");
    evolve->add_option("--stop-tol", ev_stop,
                       "early stop once the corrected gap stays below this");
    evolve->add_option("--out", ev_out, "final corrected values CSV");
    evolve->add_option("--gap-out", ev_gap, "per-step corrected gap CSV");
    evolve->add_option("--frames-out", ev_frames,
                       "prefix for raw frames <prefix><step>.csv");
    evolve->add_option("--frame-stride", ev_stride,
                       "steps between frames (default max_steps/8)");
    evolve->callback([&] {
        rc = run_evolve(common, ev_init, ev_tmax, ev_stop, ev_out, ev_gap,
                        ev_frames, ev_stride, out, err);
    });

    CLI::App* solve = app.add_subcommand(
        "solve", "stationary solution via the representation formula");
    add_common(solve, common);
    std::string so_init = "const:0", so_out = "solution.csv", so_rf;
    double so_tol = 0.0;
    solve->add_option("--init", so_init, "boundary data (default const:0)");
    solve->add_option("--tol-aubry", so_tol,
                      "membership threshold (default from c disagreement)");
    solve->add_option("--out", so_out, "solution CSV path");
    solve->add_option("--rf-out", so_rf,
                      "also write the Aubry-restricted representation");
    solve->callback([&] {
        rc = run_solve(common, so_init, so_tol, so_out, so_rf, out, err);
    });

    CLI::App* check = app.add_subcommand(
        "check", "certify a grid function as a viscosity solution");
    add_common(check, common);
    std::string ck_solution, ck_out;
    double ck_c = 0.0, ck_slope_tol = 0.0;
    check->add_option("--solution", ck_solution, "grid CSV to certify")
        ->required();
    CLI::Option* ck_c_opt =
        check->add_option("--c", ck_c, "level to test (default computed)");
    check->add_option("--slope-tol", ck_slope_tol,
                      "kink threshold (default 8*max dx)");
    check->add_option("--out", ck_out, "per-state violation CSV");
    check->callback([&] {
        rc = run_check(common, ck_solution, ck_c, ck_c_opt->count() > 0,
                       ck_slope_tol, ck_out, out, err);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

}  // namespace graphkam
