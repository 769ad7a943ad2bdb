#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zorich/analysis.hpp"
#include "zorich/io.hpp"
#include "zorich/planar.hpp"
#include "zorich/render.hpp"
#include "zorich/symbolic.hpp"

namespace {

using nlohmann::json;

constexpr const char* kDefaultConfig = R"json({
  "map": {
    "lambda": 2.0,
    "nu": 1.0,
    "face": "sphere",
    "overflow_guard": 700.0
  },
  "dynamics": {
    "horizon": 64,
    "escape_radius": 1e10
  },
  "render": {
    "width": 512,
    "height": 512,
    "plane": "diagonal",
    "offset": 0.0,
    "window": [-8.0, 8.0, -8.0, 8.0]
  }
})json";

void merge_into(json& base, const json& extra) {
    if (!extra.is_object()) throw zorich::ConfigError("config document must be a JSON object");
    for (const auto& [key, value] : extra.items()) {
        if (value.is_object() && base.contains(key) && base[key].is_object()) {
            merge_into(base[key], value);
        } else {
            base[key] = value;
        }
    }
}

json load_config(const std::string& path) {
    json cfg = json::parse(kDefaultConfig);
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw zorich::ConfigError("cannot read config file: " + path);
        json user;
        try {
            in >> user;
        } catch (const json::parse_error& e) {
            throw zorich::ConfigError(std::string("config parse error: ") + e.what());
        }
        merge_into(cfg, user);
    }
    return cfg;
}

zorich::MapParams map_params_from(const json& cfg) {
    zorich::MapParams p;
    const json& m = cfg.at("map");
    p.lambda = m.at("lambda").get<double>();
    p.nu = m.at("nu").get<double>();
    p.overflow_guard = m.at("overflow_guard").get<double>();
    const std::string face = m.at("face").get<std::string>();
    if (face == "sphere") {
        p.face = zorich::FaceKind::Sphere;
    } else if (face == "pyramid") {
        p.face = zorich::FaceKind::Pyramid;
    } else {
        throw zorich::ConfigError("unknown face kind: " + face);
    }
    if (!(p.lambda > 0.0) || !(p.nu > 0.0)) {
        throw zorich::ConfigError("lambda and nu must be positive");
    }
    return p;
}

zorich::PlaneKind plane_kind_from(const std::string& name) {
    if (name == "diagonal") return zorich::PlaneKind::Diagonal;
    if (name == "antidiagonal") return zorich::PlaneKind::AntiDiagonal;
    if (name == "x3") return zorich::PlaneKind::X3Const;
    if (name == "x2") return zorich::PlaneKind::X2Const;
    if (name == "x1") return zorich::PlaneKind::X1Const;
    throw zorich::ConfigError("unknown slice plane: " + name);
}

int resolve_threads(std::optional<int> cli_threads) {
    if (cli_threads) {
        if (*cli_threads < 1) throw zorich::ConfigError("--threads must be positive");
        return *cli_threads;
    }
    if (const char* env = std::getenv("ZORICH_LAB_THREADS")) {
        const int n = std::atoi(env);
        if (n < 1) throw zorich::ConfigError("ZORICH_LAB_THREADS must be a positive integer");
        return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<zorich::BeamIndex> parse_word(const std::string& text) {
    std::vector<zorich::BeamIndex> word;
    std::stringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos) {
            throw zorich::ConfigError("word entries must look like i,j separated by ';'");
        }
        try {
            word.push_back({std::stoll(pair.substr(0, comma)),
                            std::stoll(pair.substr(comma + 1))});
        } catch (const std::exception&) {
            throw zorich::ConfigError("word entries must be integer pairs");
        }
    }
    if (word.empty()) throw zorich::ConfigError("word must be nonempty");
    return word;
}

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    std::optional<int> threads;
    std::uint64_t seed = 20260819;
};

int run_render(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params) {
    const json& r = cfg.at("render");
    zorich::SliceSpec slice;
    slice.kind = plane_kind_from(r.at("plane").get<std::string>());
    slice.offset = r.at("offset").get<double>();
    const auto& window = r.at("window");
    if (!window.is_array() || window.size() != 4) {
        throw zorich::ConfigError("render.window must be [u0, u1, v0, v1]");
    }
    slice.u0 = window[0].get<double>();
    slice.u1 = window[1].get<double>();
    slice.v0 = window[2].get<double>();
    slice.v1 = window[3].get<double>();
    slice.validate();

    zorich::RenderOptions opts;
    opts.horizon = cfg.at("dynamics").at("horizon").get<int>();
    opts.escape_radius = cfg.at("dynamics").at("escape_radius").get<double>();
    opts.n_threads = resolve_threads(g.threads);

    const int width = r.at("width").get<int>();
    const int height = r.at("height").get<int>();
    const zorich::RasterGrid grid = zorich::render_slice(params, slice, width, height, opts);

    const std::string out = g.out_path.empty() ? std::string("render.ppm") : g.out_path;
    if (out.size() >= 4 && out.compare(out.size() - 4, 4, ".raw") == 0) {
        zorich::write_verdict_raw(out, grid, slice);
    } else {
        zorich::write_ppm(out, grid);
    }
    std::size_t bounded = 0, escaping = 0;
    for (const std::uint8_t v : grid.verdict) {
        bounded += v == 1;
        escaping += v == 2;
    }
    std::printf("wrote %s (%dx%d, %zu bounded, %zu escaping, %zu undecided)\n", out.c_str(),
                width, height, bounded, escaping,
                grid.verdict.size() - bounded - escaping);
    return 0;
}

int run_orbit(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params,
              double x1, double x2, double x3, int steps) {
    const double escape_radius = cfg.at("dynamics").at("escape_radius").get<double>();
    const zorich::OrbitTrace trace =
        zorich::zorich_iterate(params, {x1, x2, x3}, steps, escape_radius);
    const char* stop = "completed";
    if (trace.stop == zorich::OrbitTrace::Stop::Escaped) stop = "escaped";
    if (trace.stop == zorich::OrbitTrace::Stop::Overflow) stop = "overflow";
    if (!g.out_path.empty()) {
        zorich::write_points_csv(g.out_path, trace.points);
        std::printf("wrote %s (%zu points, stop=%s)\n", g.out_path.c_str(),
                    trace.points.size(), stop);
    } else {
        std::printf("k,x1,x2,x3\n");
        for (std::size_t k = 0; k < trace.points.size(); ++k) {
            const zorich::Vec3& p = trace.points[k];
            std::printf("%zu,%.17g,%.17g,%.17g\n", k, p.x1, p.x2, p.x3);
        }
        std::printf("# stop=%s\n", stop);
    }
    return 0;
}

int run_itinerary(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params,
                  double x1, double x2, double x3, int steps) {
    (void)cfg;
    const zorich::Itinerary it = zorich::itinerary(params, {x1, x2, x3}, steps);
    std::ostringstream rows;
    rows << "k,i,j\n";
    for (std::size_t k = 0; k < it.symbols.size(); ++k) {
        rows << k << ',' << it.symbols[k].i << ',' << it.symbols[k].j << '\n';
    }
    if (!g.out_path.empty()) {
        std::ofstream out(g.out_path);
        if (!out) throw zorich::ConfigError("cannot open output file: " + g.out_path);
        out << rows.str();
        std::printf("wrote %s (%zu symbols%s)\n", g.out_path.c_str(), it.symbols.size(),
                    it.truncated ? ", truncated" : "");
    } else {
        std::fputs(rows.str().c_str(), stdout);
        if (it.truncated) std::printf("# truncated by overflow\n");
    }
    return 0;
}

int run_periodic(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params,
                 const std::string& word_text, double tol) {
    (void)cfg;
    const std::vector<zorich::BeamIndex> word = parse_word(word_text);
    const zorich::PeriodicResult res = zorich::periodic_point(params, word, tol);
    std::printf("point: %.17g %.17g %.17g\n", res.point.x1, res.point.x2, res.point.x3);
    std::printf("residual: %.3e after %d rounds (%s)\n", res.residual, res.rounds,
                res.converged ? "converged" : "not converged");
    if (!g.out_path.empty()) zorich::write_points_csv(g.out_path, {res.point});
    return res.converged ? 0 : 2;
}

int run_verify(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params,
               int samples, int pairs) {
    (void)cfg;
    const zorich::FaceModel face = zorich::make_face_model(params);
    zorich::SuiteOptions opts;
    opts.n_samples = samples;
    opts.n_pairs = pairs;
    opts.seed = g.seed;
    const std::vector<zorich::CheckRecord> records =
        zorich::run_verification_suite(params, face, opts);
    bool all_ok = true;
    for (const zorich::CheckRecord& rec : records) {
        std::printf("%-18s %-4s lhs=%.6g rhs=%.6g (%s)\n", rec.check.c_str(),
                    rec.ok ? "ok" : "FAIL", rec.lhs, rec.rhs, rec.params.c_str());
        all_ok = all_ok && rec.ok;
    }
    if (!g.out_path.empty()) {
        json doc = json::array();
        for (const zorich::CheckRecord& rec : records) {
            doc.push_back({{"check", rec.check},
                           {"params", rec.params},
                           {"lhs", rec.lhs},
                           {"rhs", rec.rhs},
                           {"ok", rec.ok}});
        }
        std::ofstream out(g.out_path);
        if (!out) throw zorich::ConfigError("cannot open output file: " + g.out_path);
        out << doc.dump(2) << '\n';
    }
    return all_ok ? 0 : 2;
}

int run_surfaces(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params,
                 int n_max, int resolution) {
    (void)cfg;
    std::ostringstream rows;
    rows << "n,numeric,formula\n";
    std::printf("%-4s %-22s %-22s %s\n", "n", "numeric", "formula", "rel_err");
    for (int n = 0; n <= n_max; ++n) {
        const zorich::VolumeTn v = zorich::volume_Tn(params, n, resolution);
        std::printf("%-4d %-22.15g %-22.15g %.3e\n", n, v.numeric, v.formula,
                    std::abs(v.numeric - v.formula) / v.formula);
        rows << n << ',' << v.numeric << ',' << v.formula << '\n';
    }
    if (!g.out_path.empty()) {
        std::ofstream out(g.out_path);
        if (!out) throw zorich::ConfigError("cannot open output file: " + g.out_path);
        out << rows.str();
    }
    return 0;
}

int run_curves(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params,
               int k_max, int n_points) {
    (void)cfg;
    const auto curves = zorich::gamma_k_curves(params, k_max, n_points);
    const std::string out = g.out_path.empty() ? std::string("curves.csv") : g.out_path;
    zorich::write_curves_csv(out, curves);
    std::printf("wrote %s (%d curves, %d points each)\n", out.c_str(), k_max + 1, n_points);
    return 0;
}

int run_regime(const GlobalOptions& g, const json& cfg, const zorich::MapParams& params) {
    (void)cfg;
    const zorich::FaceModel face = zorich::make_face_model(params);
    const zorich::RegimeReport rep = zorich::regime_report(params, face);
    json doc = {{"lambda", rep.lambda},
                {"nu", rep.nu},
                {"l_hat", rep.l_hat},
                {"ell_hat", rep.ell_hat},
                {"theta_hat", rep.theta_hat},
                {"min_norm", rep.min_norm},
                {"lambda_threshold", rep.lambda_threshold},
                {"nu_threshold", rep.nu_threshold},
                {"axis_product", rep.axis_product},
                {"distortion_constant", rep.c_hgen},
                {"expanding_regime", rep.expanding_regime},
                {"axis_regime", rep.axis_regime},
                {"core_image_wedge", rep.core_image_wedge}};
    const std::string text = doc.dump(2);
    std::printf("%s\n", text.c_str());
    if (!g.out_path.empty()) {
        std::ofstream out(g.out_path);
        if (!out) throw zorich::ConfigError("cannot open output file: " + g.out_path);
        out << text << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the dynamics of Zorich maps"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON config file merged over built-in defaults");
    app.add_option("--out", g.out_path, "output file path");
    int threads_value = 0;
    auto* threads_opt =
        app.add_option("--threads", threads_value, "worker threads (overrides ZORICH_LAB_THREADS)");
    app.add_option("--seed", g.seed, "seed for sampled checks");

    app.fallthrough(true);
    auto* c_render = app.add_subcommand("render", "raster a plane slice of the dynamics");
    auto* c_orbit = app.add_subcommand("orbit", "forward orbit of one point");
    auto* c_itin = app.add_subcommand("itinerary", "coarse tile itinerary of one point");
    auto* c_periodic = app.add_subcommand("periodic", "periodic point for a beam word");
    auto* c_verify = app.add_subcommand("verify", "run the verification suite");
    auto* c_surfaces = app.add_subcommand("surfaces", "shell volumes between level surfaces");
    auto* c_curves = app.add_subcommand("curves", "hairs: pullbacks of the negative axis");
    auto* c_regime = app.add_subcommand("regime", "face constants and parameter regime");

    double x1 = 0.0, x2 = 0.0, x3 = 0.0;
    int steps = 64;
    for (CLI::App* sub : {c_orbit, c_itin}) {
        sub->add_option("--x1", x1, "start point, first coordinate");
        sub->add_option("--x2", x2, "start point, second coordinate");
        sub->add_option("--x3", x3, "start point, height");
        sub->add_option("--steps", steps, "iteration count");
    }

    std::string word_text;
    double tol = 1e-11;
    c_periodic->add_option("--word", word_text, "beam word, e.g. \"2,2\" or \"0,0;2,-3\"")
        ->required();
    c_periodic->add_option("--tol", tol, "pullback convergence tolerance");

    int samples = 2000, pairs = 1000;
    c_verify->add_option("--samples", samples, "sample count for pointwise checks");
    c_verify->add_option("--pairs", pairs, "pair count for two-point checks");

    int n_max = 5, resolution = 256;
    c_surfaces->add_option("--n", n_max, "largest shell index");
    c_surfaces->add_option("--resolution", resolution, "quadrature resolution per axis");

    int k_max = 4, n_points = 200;
    c_curves->add_option("--k", k_max, "number of pullbacks");
    c_curves->add_option("--points", n_points, "sample points per curve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (threads_opt->count() > 0) g.threads = threads_value;
        const json cfg = load_config(g.config_path);
        const zorich::MapParams params = map_params_from(cfg);
        if (c_render->parsed()) return run_render(g, cfg, params);
        if (c_orbit->parsed()) return run_orbit(g, cfg, params, x1, x2, x3, steps);
        if (c_itin->parsed()) return run_itinerary(g, cfg, params, x1, x2, x3, steps);
        if (c_periodic->parsed()) return run_periodic(g, cfg, params, word_text, tol);
        if (c_verify->parsed()) return run_verify(g, cfg, params, samples, pairs);
        if (c_surfaces->parsed()) return run_surfaces(g, cfg, params, n_max, resolution);
        if (c_curves->parsed()) return run_curves(g, cfg, params, k_max, n_points);
        if (c_regime->parsed()) return run_regime(g, cfg, params);
        return 1;
    } catch (const zorich::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
