#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "graphkam/grid.hpp"
#include "graphkam/lagrangian.hpp"
#include "graphkam/weak_kam.hpp"

namespace graphkam {

// Line-oriented graph description:
//   # comment
//   vertex <name>
//   edge <name> <v0> <v1> length=<f> [kinetic=<f>] [potential=poly:c0,c1,..]
// kinetic defaults to 1, potential to poly:0 (free motion).
struct ParsedSystem {
    std::unique_ptr<MetricGraph> graph;  // stable address for lagrangian
    GraphLagrangian lagrangian;
    std::vector<std::string> errors;    // parse + validation + compatibility
    std::vector<std::string> warnings;  // non-fatal validation notes

    bool ok() const { return errors.empty() && graph != nullptr; }
};

ParsedSystem parse_spec(const std::string& text);
ParsedSystem parse_spec_file(const std::string& path);

// Canonical emission; parse(emit(parse(t))) reproduces parse(t) exactly.
std::string emit_spec(const MetricGraph& g, const GraphLagrangian& gl);

// Canonical CSV row order of a grid: by (edge name, s) ascending, each
// state exactly once, vertices under their canonical edge end.
struct CsvRow {
    uint32_t edge = 0;
    double s = 0.0;
    StateId state = kNoState;
};
std::vector<CsvRow> csv_rows(const Grid& grid);

// header edge_id,s,value; s at 9 significant digits, value at 12.
void write_grid_csv(const std::string& path, const Grid& grid,
                    const std::vector<double>& values);
// Missing rows map to the sentinel, so sparse files seed point sources.
// Throws std::runtime_error on unreadable files or rows off the grid.
std::vector<double> read_grid_csv(const std::string& path, const Grid& grid);

// header src_edge,src_s,dst_edge,dst_s,value; row-major over sources.
void write_matrix_csv(const std::string& path, const Grid& grid,
                      const BarrierMatrix& m);

// header t,gap.
void write_gap_csv(const std::string& path, const std::vector<double>& times,
                   const std::vector<double>& gaps);

// Initial data: "const:<v>", "linear:<a>,<b>" (a*s+b), "cos:<a>,<b>"
// (cos(a*s+b)) with s the canonical edge offset of each state, or a path
// to a grid CSV.
std::vector<double> eval_init(const std::string& expr, const Grid& grid);

// "edge:s" -> nearest grid state; notes the snap distance when nonzero.
StateId parse_source_point(const std::string& text, const Grid& grid,
                           double* snap_distance = nullptr);

// Full command-line driver. Exit codes: 0 success, 1 bad input or failed
// validation/certification, 2 numerical diagnostics (negative cycle beyond
// tolerance, Peierls window too small, empty Aubry set).
int run_command(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err);

}  // namespace graphkam
