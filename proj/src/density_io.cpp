#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "renyi/densities.hpp"
#include "renyi/error.hpp"

namespace renyi {

namespace {

constexpr double kSpacingJitter = 1e-9;

bool parse_row(const std::string& line, double& x, double& f) {
    const char* p = line.c_str();
    char* end = nullptr;
    x = std::strtod(p, &end);
    if (end == p) return false;
    p = end;
    while (*p == ' ' || *p == '\t') ++p;
    if (*p != ',') return false;
    ++p;
    f = std::strtod(p, &end);
    if (end == p) return false;
    p = end;
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    return *p == '\0';
}

} // namespace

GridDensity read_density_csv(std::istream& in) {
    std::vector<double> xs;
    std::vector<double> fs;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        double x = 0.0;
        double f = 0.0;
        if (!parse_row(line, x, f)) {
            if (!seen_data && xs.empty()) {
                seen_data = true;  // header line
                continue;
            }
            throw ParseError("density CSV line " + std::to_string(line_no) + ": expected 'x,f'");
        }
        seen_data = true;
        if (!std::isfinite(x) || !std::isfinite(f) || f < 0.0)
            throw ParseError("density CSV line " + std::to_string(line_no) + ": need finite x and f >= 0");
        xs.push_back(x);
        fs.push_back(f);
    }
    if (xs.size() < kMinGridLen)
        throw ParseError("density CSV needs at least " + std::to_string(kMinGridLen) + " rows");
    const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(step > 0.0)) throw ParseError("density CSV: x must be strictly increasing");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double d = xs[i] - xs[i - 1];
        if (!(d > 0.0)) throw ParseError("density CSV: x must be strictly increasing");
        if (std::abs(d - step) > kSpacingJitter * step)
            throw ParseError("density CSV: x spacing is not uniform at row " + std::to_string(i + 1));
    }
    return normalize(GridDensity(xs.front(), xs.back(), std::move(fs)));
}

GridDensity read_density_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open density CSV '" + path + "'");
    return read_density_csv(in);
}

void write_density_csv(std::ostream& out, const GridDensity& f) {
    out << "x,f\n";
    char buf[64];
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.x(i), f[i]);
        out << buf;
    }
}

} // namespace renyi
