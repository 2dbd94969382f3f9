#include "renyi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "renyi/densities.hpp"
#include "renyi/error.hpp"
#include "renyi/kernels.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSliceFloor = 1e-12;

double trapezoid_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

// log \int s^r over samples above the floor, for raw samples with a given step.
double log_power_integral_samples(std::span<const double> s, double step, double r) {
    const double lmax = kernels::max_log(s, kDensityFloor);
    if (!std::isfinite(lmax)) throw IntegrabilityError("no samples above the density floor");
    const auto sums = kernels::parallel::log_sums(s, r, r * lmax, 0.0, kDensityFloor);
    const double integral = sums.s0 * step;
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw IntegrabilityError("integral of f^r is zero or not finite on the grid");
    const double out = r * lmax + std::log(integral);
    if (!std::isfinite(out)) throw IntegrabilityError("integral of f^r overflows");
    return out;
}

struct EscortStats {
    double mean_log = 0.0;  // E log f(X_r)
    double var_log = 0.0;   // Var log f(X_r)
};

EscortStats escort_stats(const GridDensity& f, double r) {
    const auto v = f.values();
    const double lmax = kernels::max_log(v, kDensityFloor);
    if (!std::isfinite(lmax)) throw IntegrabilityError("no samples above the density floor");
    const auto first = kernels::parallel::log_sums(v, r, r * lmax, 0.0, kDensityFloor);
    if (!(first.s0 > 0.0) || !std::isfinite(first.s0)) throw IntegrabilityError("escort is not normalizable");
    EscortStats out;
    out.mean_log = first.s1 / first.s0;
    const auto second = kernels::parallel::log_sums(v, r, r * lmax, out.mean_log, kDensityFloor);
    out.var_log = std::max(0.0, second.s2 / second.s0);
    return out;
}

// Mass of f on grid points where g is below the floor.
double mass_outside(std::span<const double> f, std::span<const double> g, double step) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= kDensityFloor && g[i] < kDensityFloor) m += trapezoid_weight(i, f.size()) * f[i];
    }
    return m * step;
}

} // namespace

double log_power_integral(const GridDensity& f, double r) {
    return log_power_integral_samples(f.values(), f.step(), r);
}

double shannon_entropy(const GridDensity& f) {
    const auto v = f.values();
    const double lmax = kernels::max_log(v, kDensityFloor);
    if (!std::isfinite(lmax)) throw IntegrabilityError("no samples above the density floor");
    const auto sums = kernels::parallel::log_sums(v, 1.0, lmax, 0.0, kDensityFloor);
    return -std::exp(lmax) * sums.s1 * f.step();
}

double renyi_entropy(const GridDensity& f, const RenyiOrder& r) {
    if (r.is_limit_one()) return shannon_entropy(f);
    return log_power_integral(f, r.value()) / (1.0 - r.value());
}

double gaussian_renyi_entropy(int n, double sigma2, const RenyiOrder& r) {
    if (n < 1) throw DomainError("dimension must be >= 1");
    if (!(sigma2 > 0.0)) throw DomainError("variance must be > 0");
    const double half_n = 0.5 * n;
    if (r.is_limit_one()) return half_n * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma2);
    const double rv = r.value();
    return half_n * std::log(2.0 * std::numbers::pi * sigma2) + half_n * r.conjugate() * std::log(rv) / rv;
}

double entropy_power(const GridDensity& f, const RenyiOrder& r) { return std::exp(2.0 * renyi_entropy(f, r)); }

double cross_entropy(const GridDensity& f, const GridDensity& g) {
    const auto [a, b] = on_common_grid(f, g);
    const auto fv = a.values();
    const auto gv = b.values();
    if (mass_outside(fv, gv, a.step()) > kSupportMassSlack) return kInf;
    double s = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        if (fv[i] < kDensityFloor || gv[i] < kDensityFloor) continue;
        s += trapezoid_weight(i, fv.size()) * fv[i] * std::log(gv[i]);
    }
    return -s * a.step();
}

double kl_divergence(const GridDensity& f, const GridDensity& g) {
    const auto [a, b] = on_common_grid(f, g);
    const auto fv = a.values();
    const auto gv = b.values();
    if (mass_outside(fv, gv, a.step()) > kSupportMassSlack) return kInf;
    double s = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        if (fv[i] < kDensityFloor || gv[i] < kDensityFloor) continue;
        s += trapezoid_weight(i, fv.size()) * fv[i] * (std::log(fv[i]) - std::log(gv[i]));
    }
    return s * a.step();
}

double renyi_divergence(const GridDensity& f, const GridDensity& g, const RenyiOrder& r) {
    if (r.is_limit_one()) return kl_divergence(f, g);
    const double rv = r.value();
    const auto [a, b] = on_common_grid(f, g);
    const auto fv = a.values();
    const auto gv = b.values();
    if (rv > 1.0 && mass_outside(fv, gv, a.step()) > kSupportMassSlack) return kInf;

    std::vector<double> logs(fv.size(), -kInf);
    double lmax = -kInf;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        if (fv[i] < kDensityFloor || gv[i] < kDensityFloor) continue;
        logs[i] = rv * std::log(fv[i]) + (1.0 - rv) * std::log(gv[i]);
        lmax = std::max(lmax, logs[i]);
    }
    if (!std::isfinite(lmax)) return kInf;  // disjoint supports
    double s = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (std::isfinite(logs[i])) s += trapezoid_weight(i, logs.size()) * std::exp(logs[i] - lmax);
    }
    const double log_integral = lmax + std::log(s * a.step());
    return log_integral / (rv - 1.0);
}

double relative_renyi(const GridDensity& f, const GridDensity& g, const RenyiOrder& r) {
    if (r.is_limit_one()) return kl_divergence(f, g);
    return renyi_divergence(escort(f, r), escort(g, r), RenyiOrder(1.0 / r.value()));
}

double cross_term(const GridDensity& f, const GridDensity& g, const RenyiOrder& r) {
    const double rc = r.conjugate();
    const auto [a, b] = on_common_grid(f, escort(g, r));
    const auto fv = a.values();
    const auto gv = b.values();
    if (rc < 0.0 && mass_outside(fv, gv, a.step()) > kSupportMassSlack) return kInf;

    std::vector<double> logs(fv.size(), -kInf);
    double lmax = -kInf;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        if (fv[i] < kDensityFloor || gv[i] < kDensityFloor) continue;
        logs[i] = std::log(fv[i]) + std::log(gv[i]) / rc;
        lmax = std::max(lmax, logs[i]);
    }
    if (!std::isfinite(lmax)) return kInf;
    double s = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (std::isfinite(logs[i])) s += trapezoid_weight(i, logs.size()) * std::exp(logs[i] - lmax);
    }
    return -rc * (lmax + std::log(s * a.step()));
}

// ---------------------------------------------------------------------------
// Joint2D

Joint2D::Joint2D(double x_min, double x_max, std::size_t nx, double z_min, double z_max, std::size_t nz,
                 std::vector<double> values)
    : x_min_(x_min), x_max_(x_max), z_min_(z_min), z_max_(z_max), nx_(nx), nz_(nz), values_(std::move(values)) {
    if (!(x_min < x_max) || !(z_min < z_max)) throw GridError("joint grid needs x_min < x_max and z_min < z_max");
    if (nx < 3 || nz < 3) throw GridError("joint grid needs at least 3 points per axis");
    if (values_.size() != nx * nz) throw GridError("joint values must have nx * nz entries");
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) throw GridError("joint values must be finite and >= 0");
    }
    step_x_ = (x_max - x_min) / static_cast<double>(nx - 1);
    step_z_ = (z_max - z_min) / static_cast<double>(nz - 1);
    if (std::abs(mass() - 1.0) > kMassTolerance) throw DegenerateDensityError("joint density must have unit mass");
}

Joint2D Joint2D::product(const GridDensity& f, const GridDensity& g) {
    std::vector<double> v(f.size() * g.size());
    for (std::size_t iz = 0; iz < g.size(); ++iz)
        for (std::size_t ix = 0; ix < f.size(); ++ix) v[iz * f.size() + ix] = f[ix] * g[iz];
    return Joint2D(f.x_min(), f.x_max(), f.size(), g.x_min(), g.x_max(), g.size(), std::move(v));
}

Joint2D Joint2D::bivariate_gaussian(double rho, std::size_t n, double half_width) {
    if (!(std::abs(rho) < 1.0)) throw ParameterError("correlation must lie in (-1, 1)");
    if (!(half_width > 0.0)) throw ParameterError("half_width must be > 0");
    const double step = 2.0 * half_width / static_cast<double>(n - 1);
    const double q = 1.0 - rho * rho;
    std::vector<double> v(n * n);
    for (std::size_t iz = 0; iz < n; ++iz) {
        const double z = -half_width + static_cast<double>(iz) * step;
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = -half_width + static_cast<double>(ix) * step;
            v[iz * n + ix] = std::exp(-(x * x - 2.0 * rho * x * z + z * z) / (2.0 * q)) /
                             (2.0 * std::numbers::pi * std::sqrt(q));
        }
    }
    double m = 0.0;
    for (std::size_t iz = 0; iz < n; ++iz)
        for (std::size_t ix = 0; ix < n; ++ix) m += trapezoid_weight(ix, n) * trapezoid_weight(iz, n) * v[iz * n + ix];
    m *= step * step;
    for (double& x : v) x /= m;
    return Joint2D(-half_width, half_width, n, -half_width, half_width, n, std::move(v));
}

std::span<const double> Joint2D::row(std::size_t iz) const noexcept {
    return std::span<const double>(values_).subspan(iz * nx_, nx_);
}

double Joint2D::mass() const noexcept {
    double m = 0.0;
    for (std::size_t iz = 0; iz < nz_; ++iz) {
        double s = 0.0;
        for (std::size_t ix = 0; ix < nx_; ++ix) s += trapezoid_weight(ix, nx_) * values_[iz * nx_ + ix];
        m += trapezoid_weight(iz, nz_) * s;
    }
    return m * step_x_ * step_z_;
}

GridDensity Joint2D::marginal_x() const {
    std::vector<double> v(nx_, 0.0);
    for (std::size_t iz = 0; iz < nz_; ++iz) {
        const double w = trapezoid_weight(iz, nz_) * step_z_;
        for (std::size_t ix = 0; ix < nx_; ++ix) v[ix] += w * values_[iz * nx_ + ix];
    }
    return normalize(GridDensity(x_min_, x_max_, std::move(v)));
}

GridDensity Joint2D::marginal_z() const {
    std::vector<double> v(nz_, 0.0);
    for (std::size_t iz = 0; iz < nz_; ++iz) {
        double s = 0.0;
        for (std::size_t ix = 0; ix < nx_; ++ix) s += trapezoid_weight(ix, nx_) * values_[iz * nx_ + ix];
        v[iz] = s * step_x_;
    }
    return normalize(GridDensity(z_min_, z_max_, std::move(v)));
}

double conditional_renyi(const Joint2D& joint, const RenyiOrder& r) {
    const std::size_t nx = joint.nx();
    const std::size_t nz = joint.nz();
    std::vector<double> slice_term(nz, 0.0);
    std::vector<double> slice_weight(nz, 0.0);
    const auto nzl = static_cast<long long>(nz);

#pragma omp parallel for schedule(dynamic, 16)
    for (long long k = 0; k < nzl; ++k) {
        const auto iz = static_cast<std::size_t>(k);
        const auto row = joint.row(iz);
        double gz = 0.0;
        for (std::size_t ix = 0; ix < nx; ++ix) gz += trapezoid_weight(ix, nx) * row[ix];
        gz *= joint.step_x();
        if (gz < kSliceFloor) continue;
        std::vector<double> slice(row.begin(), row.end());
        for (double& v : slice) v /= gz;
        const double w = trapezoid_weight(iz, nz) * joint.step_z() * gz;
        slice_weight[iz] = w;
        if (r.is_limit_one()) {
            double s = 0.0;
            for (std::size_t ix = 0; ix < nx; ++ix) {
                if (slice[ix] >= kDensityFloor) s += trapezoid_weight(ix, nx) * slice[ix] * std::log(slice[ix]);
            }
            slice_term[iz] = -s * joint.step_x();
        } else {
            // ||f(.|z)||_r
            slice_term[iz] = std::exp(log_power_integral_samples(slice, joint.step_x(), r.value()) / r.value());
        }
    }

    double total = 0.0;
    double weight = 0.0;
    for (std::size_t iz = 0; iz < nz; ++iz) {
        total += slice_weight[iz] * slice_term[iz];
        weight += slice_weight[iz];
    }
    if (!(weight > 0.0)) throw DegenerateDensityError("Z-marginal vanishes everywhere");
    if (r.is_limit_one()) return total / weight;
    return -r.conjugate() * std::log(total / weight);
}

// ---------------------------------------------------------------------------

std::array<DerivativeReport, 3> derivative_identities(const GridDensity& f, const RenyiOrder& r, double h_step) {
    if (r.is_limit_one()) throw OrderError("derivative identities need r != 1");
    if (!(h_step > 0.0)) throw ParameterError("finite-difference step must be > 0");
    const double rv = r.value();
    if (rv - 2.0 * h_step <= 0.0) throw OrderError("finite-difference stencil reaches r <= 0");
    if (std::abs(rv - 1.0) <= 2.0 * h_step) throw OrderError("finite-difference stencil crosses r = 1");

    // (1 - s) h_s = log \int f^s; the window check also throws on non-integrability.
    auto F = [&](double s) { return log_power_integral(f, s); };
    (void)F(rv - 2.0 * h_step);
    (void)F(rv + 2.0 * h_step);
    const double fm = F(rv - h_step);
    const double f0 = F(rv);
    const double fp = F(rv + h_step);
    auto H = [](double fs, double s) { return fs / (1.0 - s); };

    const GridDensity fr = escort(f, r);
    std::array<DerivativeReport, 3> out;
    out[0].identity = "d/dr[(1-r)h_r] = -h(X_r||X)";
    out[0].lhs_fd = (fp - fm) / (2.0 * h_step);
    out[0].rhs_analytic = -cross_entropy(fr, f);
    out[1].identity = "d/dr h_r = -D(X_r||X)/(1-r)^2";
    out[1].lhs_fd = (H(fp, rv + h_step) - H(fm, rv - h_step)) / (2.0 * h_step);
    out[1].rhs_analytic = -kl_divergence(fr, f) / ((1.0 - rv) * (1.0 - rv));
    out[2].identity = "d2/dr2[(1-r)h_r] = Var log f(X_r)";
    out[2].lhs_fd = (fp - 2.0 * f0 + fm) / (h_step * h_step);
    out[2].rhs_analytic = varentropy(f, r);
    for (auto& d : out) {
        d.r = rv;
        d.abs_err = std::abs(d.lhs_fd - d.rhs_analytic);
    }
    return out;
}

double varentropy(const GridDensity& f, const RenyiOrder& r) { return escort_stats(f, r.value()).var_log; }

ConcavityProfile concavity_profile(const GridDensity& f, std::span<const double> r_grid) {
    if (r_grid.size() < 3) throw ParameterError("concavity profile needs at least 3 orders");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0)) throw OrderError("orders must be > 0");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw ParameterError("order grid must be strictly increasing");
    }
    ConcavityProfile out;
    out.r.assign(r_grid.begin(), r_grid.end());
    out.applicable = is_log_concave(f).log_concave;
    out.g.assign(r_grid.size(), 0.0);
    const auto n = static_cast<long long>(r_grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
        const double r = r_grid[static_cast<std::size_t>(i)];
        out.g[static_cast<std::size_t>(i)] = log_power_integral(f, r) + std::log(r);
    }
    out.worst_second_difference = -kInf;
    for (std::size_t i = 1; i + 1 < out.r.size(); ++i) {
        const double left = (out.g[i] - out.g[i - 1]) / (out.r[i] - out.r[i - 1]);
        const double right = (out.g[i + 1] - out.g[i]) / (out.r[i + 1] - out.r[i]);
        const double sd = 0.5 * (out.r[i + 1] - out.r[i - 1]) * (right - left);
        out.second_differences.push_back(sd);
        out.worst_second_difference = std::max(out.worst_second_difference, sd);
    }
    out.is_concave = out.applicable && out.worst_second_difference <= kConcavityTolerance;
    return out;
}

} // namespace renyi
