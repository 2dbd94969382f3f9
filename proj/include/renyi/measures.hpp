#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "renyi/grid_density.hpp"
#include "renyi/order.hpp"

namespace renyi {

/// log \int f^r over grid points above the density floor.
/// Throws IntegrabilityError when the integral is 0 or not finite.
[[nodiscard]] double log_power_integral(const GridDensity& f, double r);

/// h_r in nats; r = 1 is the Shannon entropy -\int f log f.
[[nodiscard]] double renyi_entropy(const GridDensity& f, const RenyiOrder& r);
[[nodiscard]] double shannon_entropy(const GridDensity& f);

/// Closed form for N(0, sigma2 I_n).
[[nodiscard]] double gaussian_renyi_entropy(int n, double sigma2, const RenyiOrder& r);

/// N_r = exp(2 h_r) (one dimension).
[[nodiscard]] double entropy_power(const GridDensity& f, const RenyiOrder& r);

/// Cross entropy -\int f log g.
[[nodiscard]] double cross_entropy(const GridDensity& f, const GridDensity& g);
/// Kullback-Leibler divergence \int f log(f/g); +inf when f charges {g = 0}.
[[nodiscard]] double kl_divergence(const GridDensity& f, const GridDensity& g);

/// Probability mass f may put on {g = 0} before a divergence is declared infinite.
inline constexpr double kSupportMassSlack = 1e-9;

/// D_r(f||g) = log(\int f^r g^{1-r}) / (r - 1); KL at r = 1.
/// Returns +inf (not an error) when r >= 1 and f is not supported inside g.
[[nodiscard]] double renyi_divergence(const GridDensity& f, const GridDensity& g,
                                      const RenyiOrder& r);

/// Delta_r(f||g) = D_{1/r}(f_r || g_r), the relative r-entropy. Requires r != 1.
[[nodiscard]] double relative_renyi(const GridDensity& f, const GridDensity& g,
                                    const RenyiOrder& r);

/// -r' log \int f g_r^{1/r'}: the r-entropy expression with g in place of f.
[[nodiscard]] double cross_term(const GridDensity& f, const GridDensity& g, const RenyiOrder& r);

/// Joint density of (X, Z) on a uniform product grid, values[iz * nx + ix].
class Joint2D {
public:
    Joint2D(double x_min, double x_max, std::size_t nx, double z_min, double z_max, std::size_t nz,
            std::vector<double> values);

    /// f(x) g(z) on the product of both grids.
    static Joint2D product(const GridDensity& f, const GridDensity& g);
    /// Standard bivariate normal with correlation rho on [-half_width, half_width]^2.
    static Joint2D bivariate_gaussian(double rho, std::size_t n, double half_width);

    [[nodiscard]] std::size_t nx() const noexcept { return nx_; }
    [[nodiscard]] std::size_t nz() const noexcept { return nz_; }
    [[nodiscard]] double step_x() const noexcept { return step_x_; }
    [[nodiscard]] double step_z() const noexcept { return step_z_; }
    [[nodiscard]] double x_min() const noexcept { return x_min_; }
    [[nodiscard]] double x_max() const noexcept { return x_max_; }
    [[nodiscard]] double z_min() const noexcept { return z_min_; }
    [[nodiscard]] double z_max() const noexcept { return z_max_; }
    [[nodiscard]] double at(std::size_t ix, std::size_t iz) const noexcept { return values_[iz * nx_ + ix]; }
    [[nodiscard]] std::span<const double> row(std::size_t iz) const noexcept;
    [[nodiscard]] double mass() const noexcept;

    [[nodiscard]] GridDensity marginal_x() const;
    [[nodiscard]] GridDensity marginal_z() const;

private:
    double x_min_, x_max_, z_min_, z_max_;
    std::size_t nx_, nz_;
    double step_x_, step_z_;
    std::vector<double> values_;
};

/// Arimoto conditional entropy -r' log E ||f(.|Z)||_r; average conditional
/// Shannon entropy at r = 1. Slices with Z-marginal below 1e-12 are skipped.
[[nodiscard]] double conditional_renyi(const Joint2D& joint, const RenyiOrder& r);

struct DerivativeReport {
    std::string identity;
    double r = 0.0;
    double lhs_fd = 0.0;
    double rhs_analytic = 0.0;
    double abs_err = 0.0;
};

/// Central finite differences in r against the escort-based right-hand sides:
///   d/dr[(1-r) h_r]   = -h(X_r || X)
///   d/dr h_r          = -D(X_r || X) / (1-r)^2
///   d2/dr2[(1-r) h_r] = Var log f(X_r)
[[nodiscard]] std::array<DerivativeReport, 3> derivative_identities(const GridDensity& f,
                                                                    const RenyiOrder& r,
                                                                    double h_step = 1e-3);

/// Var log f(X_r) with X_r ~ f_r (r = 1 gives the varentropy of f).
[[nodiscard]] double varentropy(const GridDensity& f, const RenyiOrder& r);

struct ConcavityProfile {
    std::vector<double> r;
    std::vector<double> g;                   // (1 - r) h_r + log r
    std::vector<double> second_differences;  // interior points
    bool applicable = true;                  // false when f is not log-concave
    bool is_concave = false;
    double worst_second_difference = 0.0;
};

inline constexpr double kConcavityTolerance = 1e-7;

[[nodiscard]] ConcavityProfile concavity_profile(const GridDensity& f, std::span<const double> r_grid);

} // namespace renyi
