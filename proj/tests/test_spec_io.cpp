#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "desk.hpp"
#include "graphkam/spec_io.hpp"

using namespace graphkam;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/graphkam_test_" + name) {
        std::ofstream f(path);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("emit and reparse reproduce the system", "[spec_io]") {
    ParsedSystem a = parse_spec(desk::kTwinBump);
    REQUIRE(a.ok());
    std::string canon = emit_spec(*a.graph, a.lagrangian);
    ParsedSystem b = parse_spec(canon);
    REQUIRE(b.ok());
    CHECK(emit_spec(*b.graph, b.lagrangian) == canon);
    CHECK(b.graph->edge_count() == 2);
    CHECK(b.lagrangian.edges[b.graph->edge_index("e2")].potential.coeffs ==
          std::vector<double>{0.0, 4.0, -4.0});
}

TEST_CASE("parse errors carry line numbers", "[spec_io]") {
    const char* bad =
        "vertex a\n"
        "vertex b\n"
        "edge e1 a b\n"               // missing length
        "edge e2 a b length=-1\n"     // bad length
        "edge e3 a b length=1 potential=spline:1\n"
        "wat is this\n";
    ParsedSystem sys = parse_spec(bad);
    REQUIRE(!sys.ok());
    auto has = [&](const std::string& needle) {
        for (const auto& e : sys.errors)
            if (e.find(needle) != std::string::npos) return true;
        return false;
    };
    CHECK(has("line 3: edge 'e1' is missing length="));
    CHECK(has("line 4: length must be a positive number"));
    CHECK(has("line 5: potential must be poly:"));
    CHECK(has("line 6: unknown directive 'wat'"));
}

TEST_CASE("comments and unknown fields", "[spec_io]") {
    ParsedSystem sys = parse_spec(
        "# heading\n"
        "vertex a   # trailing\n"
        "edge e a a length=2 kinetic=0.5\n");
    REQUIRE(sys.ok());
    CHECK(sys.lagrangian.edges[0].kappa == 0.5);

    sys = parse_spec("vertex a\nedge e a a length=2 color=red\n");
    REQUIRE(!sys.ok());
    CHECK(sys.errors[0].find("unknown field 'color'") != std::string::npos);
}

TEST_CASE("grid csv round trip preserves values and order", "[spec_io]") {
    auto s = desk::make_graph(desk::kTwinBump, 0.125);
    std::vector<double> u(s->grid.state_count);
    for (StateId x = 0; x < s->grid.state_count; ++x)
        u[x] = std::sin(7.0 * x) * 0.73;
    TempFile f("roundtrip.csv", "");
    write_grid_csv(f.path, s->grid, u);
    std::vector<double> back = read_grid_csv(f.path, s->grid);
    REQUIRE(back.size() == u.size());
    for (size_t i = 0; i < u.size(); ++i)
        CHECK(back[i] == Catch::Approx(u[i]).margin(1e-11));

    // identical content on a rewrite
    std::string first = slurp(f.path);
    write_grid_csv(f.path, s->grid, u);
    CHECK(slurp(f.path) == first);

    // canonical order: e1 block then e2 block, offsets ascending, vertex
    // rows once under e1
    std::istringstream lines(first);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "edge_id,s,value");
    size_t e1_rows = 0, e2_rows = 0;
    double prev = -1.0;
    bool in_e2 = false;
    while (std::getline(lines, line)) {
        bool e2 = line.rfind("e2,", 0) == 0;
        if (e2 && !in_e2) {
            in_e2 = true;
            prev = -1.0;
        }
        CHECK(in_e2 == e2);  // no interleaving
        double off = std::stod(line.substr(3));
        CHECK(off > prev);
        prev = off;
        (e2 ? e2_rows : e1_rows)++;
    }
    CHECK(e1_rows == 9);  // both vertices live on e1
    CHECK(e2_rows == 7);
}

TEST_CASE("sparse csv seeds point sources", "[spec_io]") {
    auto s = desk::make_graph(desk::kTwinBump, 0.125);
    TempFile f("sparse.csv", "edge_id,s,value\ne2,0.5,0\n");
    std::vector<double> u = read_grid_csv(f.path, s->grid);
    StateId top = s->grid.state_near({s->graph().edge_index("e2"), 0.5});
    for (StateId x = 0; x < s->grid.state_count; ++x) {
        if (x == top)
            CHECK(u[x] == 0.0);
        else
            CHECK(u[x] == GridFunction::sentinel());
    }

    TempFile off("offgrid.csv", "edge_id,s,value\ne2,0.51,0\n");
    CHECK_THROWS_AS(read_grid_csv(off.path, s->grid), std::runtime_error);
    TempFile unknown("unknown.csv", "edge_id,s,value\nzz,0.5,0\n");
    CHECK_THROWS_AS(read_grid_csv(unknown.path, s->grid), std::runtime_error);
    CHECK_THROWS_AS(read_grid_csv("/nonexistent/nope.csv", s->grid),
                    std::runtime_error);
}

TEST_CASE("initial data expressions", "[spec_io]") {
    auto s = desk::make_graph(desk::kSingleEdge, 0.25);
    std::vector<double> u = eval_init("const:2.5", s->grid);
    for (double v : u) CHECK(v == 2.5);

    u = eval_init("linear:2,-1", s->grid);
    for (StateId x = 0; x < s->grid.state_count; ++x)
        CHECK(u[x] == Catch::Approx(2 * s->grid.point_of(x).s - 1).margin(1e-15));

    u = eval_init("cos:3,0.5", s->grid);
    for (StateId x = 0; x < s->grid.state_count; ++x)
        CHECK(u[x] ==
              Catch::Approx(std::cos(3 * s->grid.point_of(x).s + 0.5)).margin(1e-15));

    CHECK_THROWS(eval_init("linear:1", s->grid));
    CHECK_THROWS(eval_init("const:zz", s->grid));
}

TEST_CASE("source points snap to grid states", "[spec_io]") {
    auto s = desk::make_graph(desk::kTwinBump, 0.125);
    double snap = -1.0;
    StateId x = parse_source_point("e2:0.5", s->grid, &snap);
    CHECK(x == s->grid.state_near({s->graph().edge_index("e2"), 0.5}));
    CHECK(snap == 0.0);
    parse_source_point("e2:0.52", s->grid, &snap);
    CHECK(snap == Catch::Approx(0.02).margin(1e-12));
    CHECK_THROWS(parse_source_point("e2", s->grid, &snap));
    CHECK_THROWS(parse_source_point("e9:0.5", s->grid, &snap));
    CHECK_THROWS(parse_source_point("e2:7", s->grid, &snap));
}

TEST_CASE("command driver end to end", "[spec_io]") {
    TempFile spec("twin.spec", desk::kTwinBump);
    std::ostringstream out, err;
    {
        const char* argv[] = {"graphkam", "validate", spec.path.c_str()};
        CHECK(run_command(3, argv, out, err) == 0);
        CHECK(out.str().find("ok") != std::string::npos);
        CHECK(out.str().find("vertex-symmetric: yes") != std::string::npos);
    }
    {
        std::ostringstream o2, e2;
        const char* argv[] = {"graphkam", "critical", spec.path.c_str(),
                              "--dx", "0.0625"};
        CHECK(run_command(5, argv, o2, e2) == 0);
        CHECK(o2.str().find("disagreement") != std::string::npos);
    }
    {
        std::ostringstream o3, e3;
        TempFile bad("broken.spec", "edge e a b\n");
        const char* argv[] = {"graphkam", "validate", bad.path.c_str()};
        CHECK(run_command(3, argv, o3, e3) == 1);
        CHECK(o3.str().find("line 1") != std::string::npos);
    }
    {
        std::ostringstream o4, e4;
        const char* argv[] = {"graphkam", "evolve", spec.path.c_str(),
                              "--dx",    "0.0625", "--init",
                              "const:0", "--tmax", "2",
                              "--out",   "/tmp/graphkam_test_ev.csv",
                              "--gap-out", "/tmp/graphkam_test_gap.csv"};
        CHECK(run_command(13, argv, o4, e4) == 0);
        std::string gap = slurp("/tmp/graphkam_test_gap.csv");
        CHECK(gap.rfind("t,gap", 0) == 0);
        std::remove("/tmp/graphkam_test_ev.csv");
        std::remove("/tmp/graphkam_test_gap.csv");
    }
    {
        std::ostringstream o5, e5;
        const char* argv[] = {"graphkam", "nonsense"};
        CHECK(run_command(2, argv, o5, e5) != 0);
    }
}
