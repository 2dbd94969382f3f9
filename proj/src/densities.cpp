#include "renyi/densities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "renyi/diagnostics.hpp"
#include "renyi/error.hpp"
#include "renyi/kernels.hpp"
#include "fft.hpp"

namespace renyi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double student_t_pdf(double dof, double x) {
    const double log_norm = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                            0.5 * std::log(dof * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (dof + 1.0) * std::log1p(x * x / dof));
}

// Values r * log f - max, exponentiated, for samples above the floor.
std::vector<double> powered(const GridDensity& f, double p) {
    const auto v = f.values();
    const double lmax = kernels::max_log(v, kDensityFloor);
    if (!std::isfinite(lmax)) throw DegenerateDensityError("density has no samples above the floor");
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= kDensityFloor) out[i] = std::exp(p * (std::log(v[i]) - lmax));
    }
    return out;
}

GridDensity power_normalize(const GridDensity& f, double p) {
    auto vals = powered(f, p);
    const double z = f.integrate(vals);
    if (!(z > 0.0) || !std::isfinite(z))
        throw IntegrabilityError("integral of f^" + fmt(p) + " is zero or not finite on the grid");
    for (double& x : vals) x /= z;
    return GridDensity(f.x_min(), f.x_max(), std::move(vals), f.omitted_tail_mass());
}

} // namespace

void validate(const AnalyticFamily& family) {
    std::visit(overloaded{
                   [](const Gaussian& g) {
                       if (!(g.sigma > 0.0) || !std::isfinite(g.sigma))
                           throw ParameterError("gaussian: sigma must be > 0");
                   },
                   [](const Uniform& u) {
                       if (!std::isfinite(u.a) || !std::isfinite(u.b) || !(u.a < u.b))
                           throw ParameterError("uniform: need a < b");
                   },
                   [](const Exponential& e) {
                       if (!(e.rate > 0.0) || !std::isfinite(e.rate))
                           throw ParameterError("exponential: rate must be > 0");
                   },
                   [](const Laplace& l) {
                       if (!(l.scale > 0.0) || !std::isfinite(l.scale))
                           throw ParameterError("laplace: scale must be > 0");
                   },
                   [](const StudentT& t) {
                       if (!(t.dof > 0.0) || !std::isfinite(t.dof))
                           throw ParameterError("student_t: dof must be > 0");
                   },
               },
               family);
}

double pdf(const AnalyticFamily& family, double x) {
    return std::visit(overloaded{
                          [x](const Gaussian& g) {
                              const double z = x / g.sigma;
                              return std::exp(-0.5 * z * z) / (g.sigma * std::sqrt(2.0 * std::numbers::pi));
                          },
                          [x](const Uniform& u) { return (x >= u.a && x <= u.b) ? 1.0 / (u.b - u.a) : 0.0; },
                          [x](const Exponential& e) { return x >= 0.0 ? e.rate * std::exp(-e.rate * x) : 0.0; },
                          [x](const Laplace& l) { return std::exp(-std::abs(x) / l.scale) / (2.0 * l.scale); },
                          [x](const StudentT& t) { return student_t_pdf(t.dof, x); },
                      },
                      family);
}

AnalyticFamily parse_family(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string name(spec.substr(0, colon));
    std::vector<double> params;
    if (colon != std::string_view::npos) {
        std::string rest(spec.substr(colon + 1));
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (tok.empty() || end == tok.c_str() || *end != '\0')
                throw ParseError("bad parameter '" + tok + "' in family spec '" + std::string(spec) + "'");
            params.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto need = [&](std::size_t k) {
        if (params.size() != k)
            throw ParseError("family '" + name + "' takes " + std::to_string(k) + " parameter(s)");
    };
    AnalyticFamily family;
    if (name == "gaussian" || name == "normal") {
        need(1);
        family = Gaussian{params[0]};
    } else if (name == "uniform") {
        need(2);
        family = Uniform{params[0], params[1]};
    } else if (name == "exponential") {
        need(1);
        family = Exponential{params[0]};
    } else if (name == "laplace") {
        need(1);
        family = Laplace{params[0]};
    } else if (name == "student_t" || name == "t") {
        need(1);
        family = StudentT{params[0]};
    } else {
        throw ParseError("unknown family '" + name + "'");
    }
    validate(family);
    return family;
}

std::string to_string(const AnalyticFamily& family) {
    return std::visit(overloaded{
                          [](const Gaussian& g) { return "gaussian:" + fmt(g.sigma); },
                          [](const Uniform& u) { return "uniform:" + fmt(u.a) + "," + fmt(u.b); },
                          [](const Exponential& e) { return "exponential:" + fmt(e.rate); },
                          [](const Laplace& l) { return "laplace:" + fmt(l.scale); },
                          [](const StudentT& t) { return "student_t:" + fmt(t.dof); },
                      },
                      family);
}

bool is_log_concave_family(const AnalyticFamily& family) {
    return !std::holds_alternative<StudentT>(family);
}

std::size_t default_grid_len() {
    if (const char* env = std::getenv("REPI_GRID_LEN")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v >= static_cast<long long>(kMinGridLen))
            return static_cast<std::size_t>(v);
        warn("ignoring invalid REPI_GRID_LEN='" + std::string(env) + "'");
    }
    return kDefaultGridLen;
}

GridDensity make_analytic(const AnalyticFamily& family, const GridOptions& options) {
    validate(family);
    if (options.grid_len < kMinGridLen)
        throw ParameterError("grid_len must be >= " + std::to_string(kMinGridLen));
    if (!(options.tail_mass > 0.0) || options.tail_mass > 1e-6)
        throw ParameterError("tail_mass must lie in (0, 1e-6]");
    if (!(options.min_order > 0.0)) throw ParameterError("min_order must be > 0");

    const double tau = options.tail_mass;
    // Escorts of order s >= 1 are lighter-tailed than f for every family here.
    const double s = std::min(options.min_order, 1.0);
    const boost::math::normal_distribution<double> std_normal;

    double lo = 0.0;
    double hi = 0.0;
    double omitted = 0.0;
    std::visit(overloaded{
                   [&](const Gaussian& g) {
                       const double z = boost::math::quantile(boost::math::complement(std_normal, tau));
                       hi = g.sigma * z / std::sqrt(s);
                       lo = -hi;
                       omitted = boost::math::cdf(boost::math::complement(std_normal, hi / g.sigma));
                   },
                   [&](const Uniform& u) {
                       lo = u.a;
                       hi = u.b;
                   },
                   [&](const Exponential& e) {
                       lo = 0.0;
                       hi = -std::log(tau) / (e.rate * s);
                       omitted = std::exp(-e.rate * hi);
                   },
                   [&](const Laplace& l) {
                       hi = l.scale * std::log(1.0 / (2.0 * tau)) / s;
                       lo = -hi;
                       omitted = 0.5 * std::exp(-hi / l.scale);
                   },
                   [&](const StudentT& t) {
                       // The escort of order s is a scaled Student t with s(dof+1)-1 degrees of freedom.
                       const double dof_s = s * (t.dof + 1.0) - 1.0;
                       if (dof_s > 0.0) {
                           const boost::math::students_t_distribution<double> escort_law(dof_s);
                           const double q = std::sqrt(t.dof / dof_s) *
                                            boost::math::quantile(boost::math::complement(escort_law, tau));
                           hi = std::min(q, options.heavy_tail_cap);
                       } else {
                           warn("student_t:" + fmt(t.dof) + " has no integrable escort of order " + fmt(s) +
                                "; values of order " + fmt(s) + " depend on the truncation");
                           hi = options.heavy_tail_cap;
                       }
                       lo = -hi;
                       const boost::math::students_t_distribution<double> law(t.dof);
                       omitted = boost::math::cdf(boost::math::complement(law, hi));
                       if (omitted > tau)
                           warn("student_t:" + fmt(t.dof) + " truncated at |x| = " + fmt(hi) + ", omitted tail mass " +
                                fmt(omitted) + " per side exceeds " + fmt(tau));
                   },
               },
               family);

    const std::size_t n = options.grid_len;
    std::vector<double> vals(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (i + 1 == n) ? hi : lo + static_cast<double>(i) * step;
        vals[i] = pdf(family, x);
    }
    return normalize(GridDensity(lo, hi, std::move(vals), omitted));
}

GridDensity make_analytic(const AnalyticFamily& family, std::size_t grid_len, double tail_mass) {
    GridOptions o;
    o.grid_len = grid_len;
    o.tail_mass = tail_mass;
    return make_analytic(family, o);
}

GridDensity normalize(const GridDensity& f) {
    const double m = f.mass();
    if (!(m > 0.0) || !std::isfinite(m)) throw DegenerateDensityError("density mass is zero or not finite");
    std::vector<double> vals(f.values().begin(), f.values().end());
    for (double& v : vals) v /= m;
    return GridDensity(f.x_min(), f.x_max(), std::move(vals), f.omitted_tail_mass());
}

GridDensity escort(const GridDensity& f, const RenyiOrder& r) {
    if (r.is_limit_one()) return f;
    return power_normalize(f, r.value());
}

GridDensity inverse_escort(const GridDensity& g, const RenyiOrder& r) {
    if (r.is_limit_one()) return g;
    return power_normalize(g, 1.0 / r.value());
}

GridDensity scale_rv(const GridDensity& f, double a) {
    if (a == 0.0 || !std::isfinite(a)) throw ScaleError("scale factor must be finite and non-zero");
    std::vector<double> vals(f.values().begin(), f.values().end());
    const double inv = 1.0 / std::abs(a);
    for (double& v : vals) v *= inv;
    if (a > 0.0) return GridDensity(a * f.x_min(), a * f.x_max(), std::move(vals), f.omitted_tail_mass());
    std::reverse(vals.begin(), vals.end());
    return GridDensity(a * f.x_max(), a * f.x_min(), std::move(vals), f.omitted_tail_mass());
}

GridDensity translate(const GridDensity& f, double shift) {
    std::vector<double> vals(f.values().begin(), f.values().end());
    return GridDensity(f.x_min() + shift, f.x_max() + shift, std::move(vals), f.omitted_tail_mass());
}

GridDensity resample(const GridDensity& f, double x_min, double step, std::size_t len) {
    if (!(step > 0.0) || len < kMinGridLen) throw GridError("resample: invalid target grid");
    std::vector<double> vals(len);
    for (std::size_t i = 0; i < len; ++i) vals[i] = f(x_min + static_cast<double>(i) * step);
    return GridDensity(x_min, x_min + static_cast<double>(len - 1) * step, std::move(vals),
                       f.omitted_tail_mass());
}

namespace {

constexpr std::size_t kMaxGridLen = std::size_t{1} << 24;

std::size_t points_for(double width, double step) {
    const double n = std::ceil(width / step - 1e-9);
    if (!(n >= 0.0) || n + 1.0 > static_cast<double>(kMaxGridLen))
        throw GridError("common grid would exceed " + std::to_string(kMaxGridLen) + " points");
    return std::max<std::size_t>(static_cast<std::size_t>(n) + 1, kMinGridLen);
}

bool same_grid(const GridDensity& f, const GridDensity& g) {
    return f.size() == g.size() && f.x_min() == g.x_min() && f.x_max() == g.x_max();
}

} // namespace

std::pair<GridDensity, GridDensity> on_common_grid(const GridDensity& f, const GridDensity& g) {
    if (same_grid(f, g)) return {f, g};
    const double lo = std::min(f.x_min(), g.x_min());
    const double hi = std::max(f.x_max(), g.x_max());
    const double step = std::min(f.step(), g.step());
    const std::size_t len = points_for(hi - lo, step);
    return {resample(f, lo, step, len), resample(g, lo, step, len)};
}

namespace {

constexpr int kMaxRefinement = 16;

// Samples of f at x0 + i * step covering f's support, with trapezoid end weights.
std::vector<double> weighted_samples(const GridDensity& f, double step, bool native) {
    std::vector<double> v;
    if (native) {
        v.assign(f.values().begin(), f.values().end());
    } else {
        const std::size_t len = points_for(f.x_max() - f.x_min(), step);
        v.resize(len);
        for (std::size_t i = 0; i < len; ++i) v[i] = f(f.x_min() + static_cast<double>(i) * step);
    }
    v.front() *= 0.5;
    v.back() *= 0.5;
    return v;
}

} // namespace

Convolution convolve_detailed(const GridDensity& f, const GridDensity& g) {
    if (!f.is_normalized() || !g.is_normalized())
        throw GridError("convolve expects normalized densities");

    const double base = std::min(f.step(), g.step());
    const bool f_native = std::abs(f.step() - base) <= 1e-12 * base;
    const bool g_native = std::abs(g.step() - base) <= 1e-12 * base;

    for (int k = 1;; k *= 2) {
        const double step = base / k;
        const auto a = weighted_samples(f, step, k == 1 && f_native);
        const auto b = weighted_samples(g, step, k == 1 && g_native);
        auto out = detail::fft_convolve(a, b);
        for (double& v : out) v *= step;
        // A single overlapping point spans no length.
        out.front() = 0.0;
        out.back() = 0.0;

        const double x0 = f.x_min() + g.x_min();
        const double x1 = x0 + static_cast<double>(out.size() - 1) * step;
        double raw = 0.0;
        for (double v : out) raw += v;
        raw *= step;
        const double drift = std::abs(raw - 1.0);

        const bool last = k >= kMaxRefinement || out.size() * 2 > kMaxGridLen;
        if (drift < kMassTolerance || last) {
            if (drift >= kMassTolerance)
                warn("convolution mass drift " + fmt(drift) + " after refinement x" + std::to_string(k));
            // FFT round-off floor.
            const double mx = *std::max_element(out.begin(), out.end());
            const double noise = 4.0 * std::numeric_limits<double>::epsilon() *
                                 std::log2(static_cast<double>(out.size())) * mx;
            for (double& v : out) {
                if (v < noise) v = 0.0;
            }
            Convolution c{normalize(GridDensity(x0, x1, std::move(out))), drift, k};
            return c;
        }
    }
}

GridDensity convolve(const GridDensity& f, const GridDensity& g) { return convolve_detailed(f, g).density; }

LogConcavity is_log_concave(const GridDensity& f, double tol) {
    if (tol < 0.0) throw ParameterError("log-concavity tolerance must be >= 0");
    const auto v = f.values();
    const double cutoff = 1e-12 * f.max_value();
    std::size_t first = v.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > cutoff) {
            first = std::min(first, i);
            last = i;
        }
    }
    LogConcavity out;
    if (first == v.size() || last < first + 2) {
        out.degenerate = true;
        return out;
    }
    std::vector<double> logs;
    logs.reserve(last - first + 1);
    double scale = 1.0;
    for (std::size_t i = first; i <= last; ++i) {
        if (!(v[i] > cutoff)) {
            // A hole inside the support: the support is not convex.
            out.log_concave = false;
            out.worst_violation = std::numeric_limits<double>::infinity();
            return out;
        }
        logs.push_back(std::log(v[i]));
        scale = std::max(scale, std::abs(logs.back()));
    }
    // Raw second differences shrink as h^2, so grids finer than the default are
    // checked at the default spacing; otherwise refinement hides convex regions.
    const std::size_t k = std::max<std::size_t>(1, v.size() / kDefaultGridLen);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = k; i + k < logs.size(); ++i)
        worst = std::max(worst, logs[i + k] - 2.0 * logs[i] + logs[i - k]);
    out.worst_violation = std::max(worst, 0.0);
    out.log_concave = worst <= tol * scale;
    return out;
}

double tail_sensitivity(const GridDensity& f, double r) {
    const auto p = powered(f, r);
    const double total = f.integrate(p);
    const std::size_t k = std::max<std::size_t>(1, p.size() / 100);
    // A side counts as a truncated tail only if the density has decayed there;
    // a true support edge (uniform, exponential at 0) carries no truncation.
    const double edge_level = 1e-3 * f.max_value();
    const bool left = f[0] < edge_level;
    const bool right = f[f.size() - 1] < edge_level;
    double edges = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (left) edges += p[i];
        if (right) edges += p[p.size() - 1 - i];
    }
    edges *= f.step();
    return total > 0.0 ? edges / total : 1.0;
}

} // namespace renyi
