#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace renyi {

inline constexpr std::size_t kMinGridLen = 64;
inline constexpr std::size_t kDefaultGridLen = 8192;
inline constexpr double kDefaultTailMass = 1e-10;
/// Finer grid for checks that resolve second differences in r near 1e-7; the
/// trapezoid error at a boundary jump (exponential, uniform) is O(h^2) in r.
inline constexpr std::size_t kFineGridLen = 65536;
/// Density values below this floor are treated as outside the support.
inline constexpr double kDensityFloor = 1e-300;
inline constexpr double kMassTolerance = 1e-6;

/// A 1-D density sampled on a uniform grid with inclusive endpoints.
///
/// Values are non-negative; x_i = x_min + i * step with step = (x_max - x_min) / (len - 1).
/// Integrals use the trapezoid rule, i.e. they are exact for the piecewise-linear
/// interpolant of the samples. Instances are immutable.
class GridDensity {
public:
    GridDensity(double x_min, double x_max, std::vector<double> values,
                double omitted_tail_mass = 0.0);

    [[nodiscard]] double x_min() const noexcept { return x_min_; }
    [[nodiscard]] double x_max() const noexcept { return x_max_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] double x(std::size_t i) const noexcept;

    /// Linear interpolation; zero outside [x_min, x_max].
    [[nodiscard]] double operator()(double x) const noexcept;

    /// Trapezoid mass.
    [[nodiscard]] double mass() const noexcept;
    [[nodiscard]] double max_value() const noexcept;
    [[nodiscard]] bool is_normalized(double tol = kMassTolerance) const noexcept;

    /// Per-side probability mass cut away when the support was truncated (0 if unknown).
    [[nodiscard]] double omitted_tail_mass() const noexcept { return omitted_tail_mass_; }

    /// Trapezoid integral of arbitrary samples on this grid.
    [[nodiscard]] double integrate(std::span<const double> samples) const noexcept;

private:
    double x_min_;
    double x_max_;
    double step_;
    std::vector<double> values_;
    double omitted_tail_mass_;
};

} // namespace renyi
