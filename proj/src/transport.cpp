#include "renyi/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "renyi/densities.hpp"
#include "renyi/diagnostics.hpp"
#include "renyi/error.hpp"
#include "renyi/measures.hpp"

namespace renyi {

namespace {

constexpr double kBulkQuantile = 1e-7;
constexpr std::size_t kMaxPushforwardLen = std::size_t{1} << 21;

double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }
// Phi(-u), accurate in the upper tail.
double normal_upper(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

struct Hermite {
    double value;
    double slope;
};

Hermite hermite(double u0, double u1, double t0, double t1, double d0, double d1, double u) {
    const double h = u1 - u0;
    const double s = (u - u0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    Hermite out;
    out.value = (2 * s3 - 3 * s2 + 1) * t0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * t1 +
                (s3 - s2) * h * d1;
    out.slope = (6 * s2 - 6 * s) * (t0 - t1) / h + (3 * s2 - 4 * s + 1) * d0 + (3 * s2 - 2 * s) * d1;
    return out;
}

// Mass of the linear piece through (x0, v0), (x1, v1) on [lo, hi] within the cell.
double linear_mass(double x0, double x1, double v0, double v1, double lo, double hi) {
    lo = std::max(lo, x0);
    hi = std::min(hi, x1);
    if (!(hi > lo)) return 0.0;
    auto at = [&](double x) { return v0 + (v1 - v0) * (x - x0) / (x1 - x0); };
    return 0.5 * (at(lo) + at(hi)) * (hi - lo);
}

} // namespace

// ---------------------------------------------------------------------------

Transport1D::Transport1D(std::vector<double> knots_u, std::vector<double> knots_t, std::vector<double> derivative)
    : u_(std::move(knots_u)), t_(std::move(knots_t)), d_(std::move(derivative)) {
    if (u_.size() < 2) throw TransportError("transport needs at least two knots");
    if (t_.size() != u_.size() || d_.size() != u_.size())
        throw TransportError("knots, images and derivatives must have equal length");
    for (std::size_t i = 0; i < u_.size(); ++i) {
        if (!std::isfinite(u_[i]) || !std::isfinite(t_[i])) throw TransportError("transport knots must be finite");
        if (!(d_[i] > 0.0) || !std::isfinite(d_[i])) throw TransportError("transport derivative must be > 0");
        if (i > 0 && !(u_[i] > u_[i - 1])) throw TransportError("knots must be strictly increasing");
        if (i > 0 && !(t_[i] > t_[i - 1])) throw TransportError("transport must be strictly increasing");
    }
}

Transport1D Transport1D::from_map(const std::function<double(double)>& map,
                                  const std::function<double(double)>& derivative, double u_min, double u_max,
                                  std::size_t knots) {
    if (!(u_min < u_max) || knots < 2) throw TransportError("invalid knot range");
    std::vector<double> u(knots), t(knots), d(knots);
    const double h = (u_max - u_min) / static_cast<double>(knots - 1);
    for (std::size_t i = 0; i < knots; ++i) {
        u[i] = i + 1 == knots ? u_max : u_min + static_cast<double>(i) * h;
        t[i] = map(u[i]);
        d[i] = derivative(u[i]);
    }
    return Transport1D(std::move(u), std::move(t), std::move(d));
}

Transport1D Transport1D::identity(double u_min, double u_max, std::size_t knots) {
    return from_map([](double u) { return u; }, [](double) { return 1.0; }, u_min, u_max, knots);
}

bool Transport1D::is_identity() const noexcept {
    for (std::size_t i = 0; i < u_.size(); ++i) {
        if (t_[i] != u_[i] || d_[i] != 1.0) return false;
    }
    return true;
}

std::size_t Transport1D::cell(double u) const noexcept {
    const auto it = std::upper_bound(u_.begin(), u_.end(), u);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - u_.begin() - 1, 0));
    return std::min(i, u_.size() - 2);
}

double Transport1D::operator()(double u) const {
    if (u < u_.front() || u > u_.back()) {
        warn("transport evaluated outside its knots at u = " + std::to_string(u) + "; clamping");
        return u < u_.front() ? t_.front() : t_.back();
    }
    const std::size_t i = cell(u);
    return hermite(u_[i], u_[i + 1], t_[i], t_[i + 1], d_[i], d_[i + 1], u).value;
}

double Transport1D::derivative_at(double u) const {
    if (u < u_.front() || u > u_.back()) {
        warn("transport derivative evaluated outside its knots; clamping");
        return u < u_.front() ? d_.front() : d_.back();
    }
    const std::size_t i = cell(u);
    return hermite(u_[i], u_[i + 1], t_[i], t_[i + 1], d_[i], d_[i + 1], u).slope;
}

double Transport1D::inverse(double y) const {
    if (y <= t_.front() || y >= t_.back()) {
        if (y < t_.front() || y > t_.back()) warn("transport inverse queried outside its range; clamping");
        return y <= t_.front() ? u_.front() : u_.back();
    }
    const auto it = std::upper_bound(t_.begin(), t_.end(), y);
    const auto i = std::min(static_cast<std::size_t>(it - t_.begin() - 1), t_.size() - 2);
    double lo = u_[i];
    double hi = u_[i + 1];
    double u = lo + (hi - lo) * (y - t_[i]) / (t_[i + 1] - t_[i]);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y));
    for (int iter = 0; iter < 60; ++iter) {
        const auto h = hermite(u_[i], u_[i + 1], t_[i], t_[i + 1], d_[i], d_[i + 1], u);
        const double err = h.value - y;
        if (std::abs(err) <= tol) break;
        if (err > 0.0) hi = u; else lo = u;
        double next = h.slope > 0.0 ? u - err / h.slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == u) break;
        u = next;
    }
    return u;
}

double Transport1D::max_fd_mismatch(double u_lo, double u_hi) const {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < u_.size(); ++i) {
        if (u_[i] < u_lo || u_[i] > u_hi) continue;
        const double fd = (t_[i + 1] - t_[i - 1]) / (u_[i + 1] - u_[i - 1]);
        worst = std::max(worst, std::abs(fd - d_[i]) / d_[i]);
    }
    return worst;
}

// ---------------------------------------------------------------------------

Transport1D quantile_transport(const GridDensity& target, double half_range, std::size_t knots) {
    if (!(half_range > 0.0) || knots < 3) throw TransportError("invalid transport knot range");
    const auto v = target.values();
    const std::size_t n = v.size();
    const double s = target.step();

    std::size_t first = n;
    std::size_t last = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] >= kDensityFloor) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == n || last == first) throw TransportError("target has zero-measure support");
    for (std::size_t i = first; i <= last; ++i) {
        if (v[i] < kDensityFloor) throw TransportError("target support is not connected");
    }

    // Cell masses and cumulative sums from both ends.
    std::vector<double> left(n, 0.0);
    std::vector<double> right(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) left[i] = left[i - 1] + 0.5 * s * (v[i - 1] + v[i]);
    for (std::size_t i = n - 1; i-- > 0;) right[i] = right[i + 1] + 0.5 * s * (v[i] + v[i + 1]);
    const double total = left[n - 1];

    struct Point {
        double x;
        double density;
    };
    // Solve \int_{x_min}^x f_lin = m (from_left) or \int_x^{x_max} f_lin = m.
    auto solve = [&](double m, bool from_left) -> Point {
        if (from_left) {
            auto it = std::upper_bound(left.begin(), left.end(), m);
            std::size_t i = std::min(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - left.begin() - 1, 0)), n - 2);
            const double rem = std::max(0.0, m - left[i]);
            const double a = (v[i + 1] - v[i]) / s;
            const double disc = std::max(0.0, v[i] * v[i] + 2.0 * a * rem);
            double t = rem > 0.0 ? 2.0 * rem / (v[i] + std::sqrt(disc)) : 0.0;
            t = std::min(t, s);
            return {target.x(i) + t, v[i] + a * t};
        }
        // right[] is decreasing; find the last i with right[i] >= m.
        auto it = std::upper_bound(right.begin(), right.end(), m, std::greater<>());
        std::size_t j = static_cast<std::size_t>(it - right.begin());  // first with right[j] < m
        j = std::clamp<std::size_t>(j, 1, n - 1);
        const std::size_t i = j - 1;
        const double rem = std::max(0.0, m - right[j]);
        const double a = (v[j] - v[i]) / s;
        const double disc = std::max(0.0, v[j] * v[j] - 2.0 * a * rem);
        double t = rem > 0.0 ? 2.0 * rem / (v[j] + std::sqrt(disc)) : 0.0;
        t = std::min(t, s);
        return {target.x(j) - t, v[j] - a * t};
    };

    std::vector<double> u(knots), t(knots), d(knots);
    std::vector<char> ok(knots, 0);
    const double h = 2.0 * half_range / static_cast<double>(knots - 1);
    for (std::size_t k = 0; k < knots; ++k) {
        u[k] = -half_range + static_cast<double>(k) * h;
        const Point p = u[k] <= 0.0 ? solve(normal_upper(-u[k]) * total, true) : solve(normal_upper(u[k]) * total, false);
        t[k] = p.x;
        d[k] = p.density > 0.0 ? normal_pdf(u[k]) / (p.density / total) : 0.0;
        ok[k] = std::isfinite(t[k]) && std::isfinite(d[k]) && d[k] > 0.0;
    }

    // Keep the largest run around u = 0 on which T is strictly increasing with T' > 0.
    const std::size_t mid = knots / 2;
    if (!ok[mid]) throw TransportError("quantile transport is degenerate at the median");
    std::size_t lo = mid;
    while (lo > 0 && ok[lo - 1] && t[lo - 1] < t[lo]) --lo;
    std::size_t hi = mid;
    while (hi + 1 < knots && ok[hi + 1] && t[hi + 1] > t[hi]) ++hi;
    if (hi - lo < 2) throw TransportError("quantile transport has too few usable knots");

    return Transport1D(std::vector<double>(u.begin() + lo, u.begin() + hi + 1),
                       std::vector<double>(t.begin() + lo, t.begin() + hi + 1),
                       std::vector<double>(d.begin() + lo, d.begin() + hi + 1));
}

Pushforward pushforward_detailed(const Transport1D& t, const GridDensity& source) {
    const double a = source.x_min();
    const double b = source.x_max();
    const double lo = std::max(a, t.u_min());
    const double hi = std::min(b, t.u_max());
    if (!(lo < hi)) throw TransportError("source support does not meet the transport domain");

    const auto v = source.values();
    const std::size_t n = v.size();
    const double s = source.step();

    Pushforward out{source};
    if (t.is_identity() && a >= t.u_min() && b <= t.u_max()) return out;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x0 = source.x(i);
        const double x1 = source.x(i + 1);
        out.clamped_mass += linear_mass(x0, x1, v[i], v[i + 1], x0, t.u_min());
        out.clamped_mass += linear_mass(x0, x1, v[i], v[i + 1], t.u_max(), x1);
    }

    // Bulk of the source in quantile terms; the output step resolves T' s there.
    double cdf = 0.0;
    double q_lo = a;
    double q_hi = b;
    bool found_lo = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cdf += 0.5 * s * (v[i] + v[i + 1]);
        if (!found_lo && cdf >= kBulkQuantile) {
            q_lo = source.x(i);
            found_lo = true;
        }
        if (cdf <= 1.0 - kBulkQuantile) q_hi = source.x(i + 1);
    }
    const double y_lo = t(lo);
    const double y_hi = t(hi);
    const double range = y_hi - y_lo;
    double step = range / static_cast<double>(kMinGridLen - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = source.x(i);
        if (x < std::max(lo, q_lo) || x > std::min(hi, q_hi)) continue;
        step = std::min(step, t.derivative_at(x) * s);
    }
    step = std::max(step, range / static_cast<double>(kMaxPushforwardLen - 1));
    const auto len = static_cast<std::size_t>(std::ceil(range / step - 1e-9)) + 1;
    const double out_step = range / static_cast<double>(len - 1);

    std::vector<double> values(len, 0.0);
    const auto lenl = static_cast<long long>(len);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < lenl; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double y = k + 1 == len ? y_hi : y_lo + static_cast<double>(k) * out_step;
        const double u = std::clamp(t.inverse(y), lo, hi);
        const double dt = t.derivative_at(u);
        const double val = dt > 0.0 ? source(u) / dt : 0.0;
        values[k] = std::isfinite(val) ? val : 0.0;
    }
    GridDensity raw(y_lo, y_hi, std::move(values), source.omitted_tail_mass());
    out.mass_defect = std::abs(raw.mass() - 1.0);
    out.density = normalize(raw);
    return out;
}

GridDensity pushforward(const Transport1D& t, const GridDensity& source) {
    return pushforward_detailed(t, source).density;
}

Preservation check_preservation(const GridDensity& f, const GridDensity& g, const RenyiOrder& r,
                                const Transport1D& t) {
    Preservation out;
    out.delta_src = relative_renyi(f, g, r);
    if (t.is_identity()) {
        out.delta_dst = out.delta_src;
        out.excluded = !std::isfinite(out.delta_src);
        return out;
    }
    const GridDensity x = inverse_escort(pushforward(t, escort(f, r)), r);
    const GridDensity y = inverse_escort(pushforward(t, escort(g, r)), r);
    out.delta_dst = relative_renyi(x, y, r);
    out.excluded = !std::isfinite(out.delta_src) || !std::isfinite(out.delta_dst);
    out.abs_err = out.excluded ? 0.0 : std::abs(out.delta_dst - out.delta_src);
    return out;
}

GridDensity fold_abs(const GridDensity& f) {
    const double reach = std::max(std::abs(f.x_min()), std::abs(f.x_max()));
    const double start = f.x_min() >= 0.0 ? f.x_min() : (f.x_max() <= 0.0 ? -f.x_max() : 0.0);
    const double span = reach - start;
    auto len = static_cast<std::size_t>(std::ceil(span / f.step())) + 1;
    len = std::max(len, kMinGridLen);
    const double step = span / static_cast<double>(len - 1);
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double y = i + 1 == len ? reach : start + static_cast<double>(i) * step;
        if (f.x_min() >= 0.0) v[i] = f(y);
        else if (f.x_max() <= 0.0) v[i] = f(-y);
        else v[i] = f(y) + f(-y);
    }
    return normalize(GridDensity(start, reach, std::move(v)));
}

DataProcessing check_data_processing(const GridDensity& f, const GridDensity& g, const RenyiOrder& r) {
    DataProcessing out;
    out.before = relative_renyi(f, g, r);
    const RenyiOrder inv(1.0 / r.value());
    out.after = renyi_divergence(fold_abs(escort(f, r)), fold_abs(escort(g, r)), inv);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("rotation weight must lie in (0, 1)");
}

} // namespace

std::array<double, 4> rotate_covariance(double lambda, const std::array<double, 4>& cov) {
    check_lambda(lambda);
    const double a = std::sqrt(lambda);
    const double b = std::sqrt(1.0 - lambda);
    const std::array<double, 4> rot{a, b, -b, a};
    std::array<double, 4> tmp{};
    std::array<double, 4> out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) tmp[2 * i + j] = rot[2 * i] * cov[j] + rot[2 * i + 1] * cov[2 + j];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[2 * i + j] = tmp[2 * i] * rot[2 * j] + tmp[2 * i + 1] * rot[2 * j + 1];
    return out;
}

RotationDiagnostics rotation_diagnostics(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("sample vectors must have equal length");
    if (x.size() < 2) throw ParameterError("need at least two samples");
    const auto n = static_cast<double>(x.size());
    RotationDiagnostics d;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d.mean_x += x[i];
        d.mean_y += y[i];
    }
    d.mean_x /= n;
    d.mean_y /= n;
    double cxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - d.mean_x;
        const double dy = y[i] - d.mean_y;
        d.var_x += dx * dx;
        d.var_y += dy * dy;
        cxy += dx * dy;
    }
    d.var_x /= n - 1.0;
    d.var_y /= n - 1.0;
    d.correlation = cxy / ((n - 1.0) * std::sqrt(d.var_x * d.var_y));
    d.tolerance = 4.0 / std::sqrt(n);
    // The sample variance of a standard normal has standard deviation sqrt(2/N).
    d.independent = std::abs(d.mean_x) < d.tolerance && std::abs(d.mean_y) < d.tolerance &&
                    std::abs(d.var_x - 1.0) < std::numbers::sqrt2 * d.tolerance &&
                    std::abs(d.var_y - 1.0) < std::numbers::sqrt2 * d.tolerance &&
                    std::abs(d.correlation) < d.tolerance;
    return d;
}

RotatedSamples normal_rotation(double lambda, std::span<const double> x, std::span<const double> y) {
    check_lambda(lambda);
    if (x.size() != y.size()) throw ParameterError("sample vectors must have equal length");
    const double a = std::sqrt(lambda);
    const double b = std::sqrt(1.0 - lambda);
    RotatedSamples out;
    out.x.resize(x.size());
    out.y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.x[i] = a * x[i] + b * y[i];
        out.y[i] = -b * x[i] + a * y[i];
    }
    if (x.size() >= 2) out.diagnostics = rotation_diagnostics(out.x, out.y);
    return out;
}

RotatedSamples inverse_normal_rotation(double lambda, std::span<const double> x, std::span<const double> y) {
    check_lambda(lambda);
    if (x.size() != y.size()) throw ParameterError("sample vectors must have equal length");
    const double a = std::sqrt(lambda);
    const double b = std::sqrt(1.0 - lambda);
    RotatedSamples out;
    out.x.resize(x.size());
    out.y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.x[i] = a * x[i] - b * y[i];
        out.y[i] = b * x[i] + a * y[i];
    }
    if (x.size() >= 2) out.diagnostics = rotation_diagnostics(out.x, out.y);
    return out;
}

std::array<std::vector<double>, 2> standard_normal_pairs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<std::vector<double>, 2> out;
    out[0].resize(n);
    out[1].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[0][i] = normal(rng);
        out[1][i] = normal(rng);
    }
    return out;
}

} // namespace renyi
