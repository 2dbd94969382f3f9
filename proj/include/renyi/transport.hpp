#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "renyi/grid_density.hpp"
#include "renyi/order.hpp"

namespace renyi {

inline constexpr double kTransportHalfRange = 8.0;
inline constexpr std::size_t kTransportKnots = 16385;

/// Monotone map on knots with positive derivative, evaluated by cubic Hermite
/// interpolation between knots and clamped (with a warning) outside them.
class Transport1D {
public:
    Transport1D(std::vector<double> knots_u, std::vector<double> knots_t, std::vector<double> derivative);

    /// Samples an analytic increasing map and its derivative on uniform knots.
    static Transport1D from_map(const std::function<double(double)>& map,
                                const std::function<double(double)>& derivative,
                                double u_min = -kTransportHalfRange, double u_max = kTransportHalfRange,
                                std::size_t knots = kTransportKnots);
    static Transport1D identity(double u_min = -kTransportHalfRange, double u_max = kTransportHalfRange,
                                std::size_t knots = kTransportKnots);

    [[nodiscard]] std::span<const double> knots_u() const noexcept { return u_; }
    [[nodiscard]] std::span<const double> knots_t() const noexcept { return t_; }
    [[nodiscard]] std::span<const double> derivative() const noexcept { return d_; }
    [[nodiscard]] double u_min() const noexcept { return u_.front(); }
    [[nodiscard]] double u_max() const noexcept { return u_.back(); }

    /// True when every knot maps to itself with unit slope.
    [[nodiscard]] bool is_identity() const noexcept;

    [[nodiscard]] double operator()(double u) const;
    [[nodiscard]] double derivative_at(double u) const;
    /// T^{-1}(y) by bracketing on the knots and safeguarded Newton inside a cell.
    [[nodiscard]] double inverse(double y) const;

    /// Largest relative mismatch between the stored derivative and central
    /// differences of the knot images, over interior knots with u in [u_lo, u_hi].
    [[nodiscard]] double max_fd_mismatch(double u_lo, double u_hi) const;

private:
    [[nodiscard]] std::size_t cell(double u) const noexcept;

    std::vector<double> u_;
    std::vector<double> t_;
    std::vector<double> d_;
};

/// T = F_target^{-1} o Phi, with the CDF of the piecewise-linear target inverted
/// exactly cell by cell; T'(u) = phi(u) / f(T(u)).
[[nodiscard]] Transport1D quantile_transport(const GridDensity& target,
                                             double half_range = kTransportHalfRange,
                                             std::size_t knots = kTransportKnots);

struct Pushforward {
    GridDensity density;
    double mass_defect = 0.0;    // |mass - 1| before renormalization
    double clamped_mass = 0.0;   // source mass outside the transport knots
};

/// Density of T(X) for X ~ source: f_out(y) = f_src(T^{-1}(y)) / T'(T^{-1}(y)).
[[nodiscard]] Pushforward pushforward_detailed(const Transport1D& t, const GridDensity& source);
[[nodiscard]] GridDensity pushforward(const Transport1D& t, const GridDensity& source);

struct Preservation {
    double delta_src = 0.0;
    double delta_dst = 0.0;
    double abs_err = 0.0;
    bool excluded = false;   // a side was infinite
};

/// Builds X, Y with X_r = T(X*_r), Y_r = T(Y*_r) from source laws f = X*, g = Y*
/// and compares the relative r-entropies before and after.
[[nodiscard]] Preservation check_preservation(const GridDensity& f, const GridDensity& g,
                                              const RenyiOrder& r, const Transport1D& t);

/// Density of |X| (a 2-to-1 fold).
[[nodiscard]] GridDensity fold_abs(const GridDensity& f);

struct DataProcessing {
    double before = 0.0;   // Delta_r(X* || Y*)
    double after = 0.0;    // relative r-entropy after folding the escorts
};

/// Escorts are folded by |.| and the relative r-entropy recomputed.
[[nodiscard]] DataProcessing check_data_processing(const GridDensity& f, const GridDensity& g,
                                                   const RenyiOrder& r);

// Normal rotation (x, y) -> (sqrt(l) x + sqrt(1-l) y, -sqrt(1-l) x + sqrt(l) y).

/// Row-major 2x2 covariance R C R^T.
[[nodiscard]] std::array<double, 4> rotate_covariance(double lambda, const std::array<double, 4>& cov);

struct RotationDiagnostics {
    double mean_x = 0.0, mean_y = 0.0;
    double var_x = 0.0, var_y = 0.0;
    double correlation = 0.0;
    double tolerance = 0.0;     // 4 / sqrt(N)
    bool independent = false;   // all moments within the 4 sigma Monte Carlo tolerance
};

struct RotatedSamples {
    std::vector<double> x;
    std::vector<double> y;
    RotationDiagnostics diagnostics;
};

[[nodiscard]] RotatedSamples normal_rotation(double lambda, std::span<const double> x,
                                             std::span<const double> y);
/// Inverse rotation, recovering the inputs of normal_rotation.
[[nodiscard]] RotatedSamples inverse_normal_rotation(double lambda, std::span<const double> x,
                                                     std::span<const double> y);
[[nodiscard]] RotationDiagnostics rotation_diagnostics(std::span<const double> x, std::span<const double> y);

/// i.i.d. standard normal pairs from a seeded 64-bit Mersenne twister.
[[nodiscard]] std::array<std::vector<double>, 2> standard_normal_pairs(std::size_t n, std::uint64_t seed);

} // namespace renyi
