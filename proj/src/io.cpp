#include "zorich/io.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace zorich {

namespace {

std::ofstream open_text(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    return out;
}

void write_row(std::ofstream& out, const Vec3& p) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.x1, p.x2, p.x3);
    out << buf;
}

}  // namespace

void write_points_csv(const std::string& path, const std::vector<Vec3>& points) {
    std::ofstream out = open_text(path);
    out << "x1,x2,x3\n";
    for (const Vec3& p : points) write_row(out, p);
    if (!out) throw ConfigError("short write to output file: " + path);
}

void write_curves_csv(const std::string& path,
                      const std::vector<std::vector<Vec3>>& curves) {
    std::ofstream out = open_text(path);
    out << "k,x1,x2,x3\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        for (const Vec3& p : curves[k]) {
            out << k << ',';
            write_row(out, p);
        }
    }
    if (!out) throw ConfigError("short write to output file: " + path);
}

void write_verdict_raw(const std::string& path, const RasterGrid& grid,
                       const SliceSpec& slice) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw ConfigError("cannot open output file: " + path);
    const std::size_t n = grid.verdict.size();
    const std::size_t written = std::fwrite(grid.verdict.data(), 1, n, f);
    std::fclose(f);
    if (written != n) throw ConfigError("short write to output file: " + path);

    nlohmann::json sidecar;
    sidecar["dtype"] = "u8";
    sidecar["shape"] = {grid.height, grid.width};
    sidecar["order"] = "row-major";
    sidecar["box"] = {{"u0", slice.u0}, {"u1", slice.u1}, {"v0", slice.v0}, {"v1", slice.v1}};
    sidecar["values"] = {{"undecided", 0}, {"bounded", 1}, {"escaping", 2}};
    std::ofstream out = open_text(path + ".json");
    out << sidecar.dump(2) << '\n';
    if (!out) throw ConfigError("short write to output file: " + path + ".json");
}

}  // namespace zorich
