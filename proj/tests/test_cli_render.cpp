#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zorich/io.hpp"
#include "zorich/render.hpp"

using namespace zorich;

namespace {

MapParams sphere_params() { return MapParams{}; }

SliceSpec diagonal_slice(double u0, double u1, double v0, double v1) {
    SliceSpec s;
    s.kind = PlaneKind::Diagonal;
    s.u0 = u0;
    s.u1 = u1;
    s.v0 = v0;
    s.v1 = v1;
    s.validate();
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string bin_path() {
    const char* env = std::getenv("ZLAB_BIN");
    REQUIRE_MESSAGE(env != nullptr, "ZLAB_BIN must point at the CLI binary");
    return env;
}

int run_cli(const std::string& args) {
    const std::string cmd = bin_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("slice frames") {
    SliceSpec general;
    general.kind = PlaneKind::General;
    general.origin = {0.0, 0.0, 0.0};
    general.e_u = {1.0, 0.0, 0.0};
    general.e_v = {0.0, 0.7, 0.7};  // not unit length
    CHECK_THROWS_AS(general.validate(), ConfigError);

    SliceSpec empty;
    empty.u0 = 1.0;
    empty.u1 = 1.0;
    CHECK_THROWS_AS(empty.validate(), ConfigError);

    SliceSpec x2 = diagonal_slice(-1.0, 1.0, -1.0, 1.0);
    x2.kind = PlaneKind::X2Const;
    x2.offset = 0.25;
    x2.validate();
    const Vec3 pt = x2.point_at(0.5, -0.5);
    CHECK(pt.x1 == 0.5);
    CHECK(pt.x2 == 0.25);
    CHECK(pt.x3 == -0.5);
}

TEST_CASE("raster pixel centers and orientation") {
    const MapParams p = sphere_params();
    SliceSpec slice = diagonal_slice(-4.0, 4.0, 2.0, 26.0);
    RenderOptions opts;
    opts.horizon = 16;
    const RasterGrid grid = render_slice(p, slice, 8, 6, opts);
    REQUIRE(grid.width == 8);
    REQUIRE(grid.height == 6);
    // Row 0 holds the top of the window: v = v1 - dv/2.
    const double du = 8.0 / 8.0;
    const double dv = 24.0 / 6.0;
    const Classification top_left =
        classify_point(p, slice.point_at(-4.0 + 0.5 * du, 26.0 - 0.5 * dv), 16, 1e10);
    CHECK(grid.verdict[grid.index(0, 0)] == static_cast<std::uint8_t>(top_left.verdict));
    CHECK(grid.final_height[grid.index(0, 0)] == top_left.final_height);
    const Classification bottom_right =
        classify_point(p, slice.point_at(4.0 - 0.5 * du, 2.0 + 0.5 * dv), 16, 1e10);
    CHECK(grid.final_height[grid.index(7, 5)] == bottom_right.final_height);
}

TEST_CASE("render output is independent of the worker count") {
    const MapParams p = sphere_params();
    const SliceSpec slice = diagonal_slice(-6.0, 6.0, -6.0, 6.0);
    RenderOptions one;
    one.horizon = 24;
    one.n_threads = 1;
    RenderOptions five = one;
    five.n_threads = 5;
    const RasterGrid a = render_slice(p, slice, 97, 83, one);
    const RasterGrid b = render_slice(p, slice, 97, 83, five);
    CHECK(a.verdict == b.verdict);
    CHECK(a.first_escape == b.first_escape);
    CHECK(a.final_height == b.final_height);
}

TEST_CASE("ppm bytes follow the palette") {
    const MapParams p = sphere_params();
    const SliceSpec slice = diagonal_slice(-6.0, 6.0, -2.0, 10.0);
    RenderOptions opts;
    opts.horizon = 24;
    const RasterGrid grid = render_slice(p, slice, 31, 17, opts);
    const std::string path = "/tmp/zorich_test_palette.ppm";
    write_ppm(path, grid);
    const std::string bytes = read_file(path);
    const std::string header = "P6\n31 17\n255\n";
    REQUIRE(bytes.size() == header.size() + 3u * 31u * 17u);
    CHECK(bytes.compare(0, header.size(), header) == 0);
    for (int j = 0; j < 17; ++j) {
        for (int i = 0; i < 31; ++i) {
            const std::size_t idx = grid.index(i, j);
            const Rgb c = verdict_color(static_cast<Verdict>(grid.verdict[idx]),
                                        grid.first_escape[idx]);
            const std::size_t off = header.size() + 3 * idx;
            CHECK(static_cast<std::uint8_t>(bytes[off + 0]) == c.r);
            CHECK(static_cast<std::uint8_t>(bytes[off + 1]) == c.g);
            CHECK(static_cast<std::uint8_t>(bytes[off + 2]) == c.b);
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("palette colors") {
    CHECK(verdict_color(Verdict::Bounded, -1).r == 255);
    CHECK(verdict_color(Verdict::Undecided, -1).r == 0);
    const Rgb first = verdict_color(Verdict::Escaping, 0);
    CHECK(first.r == kEscapePalette[0].r);
    const Rgb wrapped = verdict_color(Verdict::Escaping, 33);
    CHECK(wrapped.r == kEscapePalette[1].r);
    CHECK(wrapped.g == kEscapePalette[1].g);
}

TEST_CASE("raw tensor with sidecar") {
    const MapParams p = sphere_params();
    const SliceSpec slice = diagonal_slice(-3.0, 3.0, -3.0, 3.0);
    RenderOptions opts;
    opts.horizon = 8;
    const RasterGrid grid = render_slice(p, slice, 12, 9, opts);
    const std::string path = "/tmp/zorich_test_tensor.raw";
    write_verdict_raw(path, grid, slice);
    const std::string raw = read_file(path);
    REQUIRE(raw.size() == 12u * 9u);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        CHECK(static_cast<std::uint8_t>(raw[k]) == grid.verdict[k]);
    }
    const std::string sidecar = read_file(path + ".json");
    CHECK(sidecar.find("\"dtype\": \"u8\"") != std::string::npos);
    CHECK(sidecar.find("\"row-major\"") != std::string::npos);
    CHECK(sidecar.find("\"shape\"") != std::string::npos);
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
}

TEST_CASE("points and curves csv") {
    const std::string path = "/tmp/zorich_test_points.csv";
    write_points_csv(path, {{1.0, 2.0, 3.0}, {-1.0, 0.5, 0.25}});
    const std::string text = read_file(path);
    CHECK(text.rfind("x1,x2,x3\n", 0) == 0);
    CHECK(text.find("1,2,3\n") != std::string::npos);
    std::remove(path.c_str());

    const std::string cpath = "/tmp/zorich_test_curves.csv";
    write_curves_csv(cpath, {{{0.0, 0.0, -1.0}}, {{4.0, 0.0, 0.5}}});
    const std::string ctext = read_file(cpath);
    CHECK(ctext.rfind("k,x1,x2,x3\n", 0) == 0);
    CHECK(ctext.find("\n1,4,0,0.5\n") != std::string::npos);
    std::remove(cpath.c_str());
}

TEST_CASE("cli happy paths") {
    CHECK(run_cli("regime") == 0);
    CHECK(run_cli("orbit --x1 4 --x2 0 --x3 0 --steps 3") == 0);
    CHECK(run_cli("itinerary --x1 1 --x2 0.5 --x3 0 --steps 4") == 0);
    CHECK(run_cli("periodic --word \"2,2\"") == 0);
    CHECK(run_cli("surfaces --n 2 --resolution 64") == 0);
    CHECK(run_cli("curves --k 2 --points 20 --out /tmp/zorich_cli_curves.csv") == 0);
    std::remove("/tmp/zorich_cli_curves.csv");
    CHECK(run_cli("verify --samples 80 --pairs 50") == 0);
}

TEST_CASE("cli config handling") {
    CHECK(run_cli("regime --config /nonexistent/config.json") == 1);

    const std::string bad = "/tmp/zorich_cli_bad.json";
    std::ofstream(bad) << "{\"map\": {\"face\": \"torus\"}}";
    CHECK(run_cli("regime --config " + bad) == 1);
    std::remove(bad.c_str());

    const std::string neg = "/tmp/zorich_cli_neg.json";
    std::ofstream(neg) << "{\"map\": {\"lambda\": -3.0}}";
    CHECK(run_cli("regime --config " + neg) == 1);
    std::remove(neg.c_str());

    CHECK(run_cli("periodic --word \"oops\"") == 1);
    CHECK(run_cli("") == 1);  // missing subcommand
}

TEST_CASE("cli render determinism across worker counts") {
    const std::string cfg = "/tmp/zorich_cli_render.json";
    std::ofstream(cfg) << R"({"render": {"width": 96, "height": 64, "window": [-5, 5, -5, 5]},
                              "dynamics": {"horizon": 20}})";
    const std::string out1 = "/tmp/zorich_cli_render1.ppm";
    const std::string out8 = "/tmp/zorich_cli_render8.ppm";
    CHECK(run_cli("render --config " + cfg + " --threads 1 --out " + out1) == 0);
    CHECK(run_cli("render --config " + cfg + " --threads 8 --out " + out8) == 0);
    const std::string b1 = read_file(out1);
    CHECK(b1 == read_file(out8));
    CHECK(b1.rfind("P6\n96 64\n255\n", 0) == 0);

    // The environment variable steers the worker count the same way.
    const std::string out_env = "/tmp/zorich_cli_render_env.ppm";
    setenv("ZORICH_LAB_THREADS", "3", 1);
    CHECK(run_cli("render --config " + cfg + " --out " + out_env) == 0);
    unsetenv("ZORICH_LAB_THREADS");
    CHECK(b1 == read_file(out_env));

    // Raw tensor output with sidecar via file extension.
    const std::string raw = "/tmp/zorich_cli_render.raw";
    CHECK(run_cli("render --config " + cfg + " --out " + raw) == 0);
    CHECK(read_file(raw).size() == 96u * 64u);
    CHECK(read_file(raw + ".json").find("u8") != std::string::npos);

    for (const std::string& f : {out1, out8, out_env, raw, raw + ".json", cfg}) {
        std::remove(f.c_str());
    }
}

TEST_CASE("cli verify exit code propagates failures") {
    // An inadmissible word makes the periodic search fail: exit 1 (domain
    // errors are reported as errors, not silent zeros).
    CHECK(run_cli("periodic --word \"0,0;-2,-2\"") == 1);
}
