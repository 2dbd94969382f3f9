#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "renyi/grid_density.hpp"
#include "renyi/order.hpp"

namespace renyi {

// Analytic test families. Gaussian and Laplace are centred at zero; the
// exponential lives on [0, inf) (entropies are translation invariant).
struct Gaussian { double sigma = 1.0; };
struct Uniform { double a = 0.0; double b = 1.0; };
struct Exponential { double rate = 1.0; };
struct Laplace { double scale = 1.0; };
struct StudentT { double dof = 1.0; };

using AnalyticFamily = std::variant<Gaussian, Uniform, Exponential, Laplace, StudentT>;

/// Throws ParameterError on invalid parameters.
void validate(const AnalyticFamily& family);

[[nodiscard]] double pdf(const AnalyticFamily& family, double x);

/// `name:params`, e.g. "gaussian:1", "uniform:0,1", "student_t:3".
[[nodiscard]] AnalyticFamily parse_family(std::string_view spec);
[[nodiscard]] std::string to_string(const AnalyticFamily& family);

/// Whether the family is log-concave (the analytic answer, not the grid test).
[[nodiscard]] bool is_log_concave_family(const AnalyticFamily& family);

struct GridOptions {
    std::size_t grid_len = kDefaultGridLen;
    double tail_mass = kDefaultTailMass;
    /// The support also covers escorts f_s for every s >= min_order with the
    /// same per-side tail mass. 1 keeps the plain quantile truncation.
    double min_order = 1.0;
    /// Half-width cap (in scale units) for heavy-tailed families.
    double heavy_tail_cap = 200.0;
};

/// Grid default length, overridable through the REPI_GRID_LEN environment variable.
[[nodiscard]] std::size_t default_grid_len();

[[nodiscard]] GridDensity make_analytic(const AnalyticFamily& family, const GridOptions& options);
[[nodiscard]] GridDensity make_analytic(const AnalyticFamily& family,
                                        std::size_t grid_len = kDefaultGridLen,
                                        double tail_mass = kDefaultTailMass);

/// Divides by the trapezoid mass. Throws DegenerateDensityError on zero/NaN mass.
[[nodiscard]] GridDensity normalize(const GridDensity& f);

/// f^r / \int f^r, computed in the log domain.
[[nodiscard]] GridDensity escort(const GridDensity& f, const RenyiOrder& r);
/// The density whose escort of order r is g, i.e. g^{1/r} normalized.
[[nodiscard]] GridDensity inverse_escort(const GridDensity& g, const RenyiOrder& r);

/// Density of aX. Throws ScaleError for a = 0.
[[nodiscard]] GridDensity scale_rv(const GridDensity& f, double a);
/// Density of X + shift.
[[nodiscard]] GridDensity translate(const GridDensity& f, double shift);

/// Linear resampling onto an explicit grid (zero outside the original support).
[[nodiscard]] GridDensity resample(const GridDensity& f, double x_min, double step, std::size_t len);

/// Both densities on the union support with the finer step; no-op when the grids coincide.
[[nodiscard]] std::pair<GridDensity, GridDensity> on_common_grid(const GridDensity& f,
                                                                 const GridDensity& g);

struct Convolution {
    GridDensity density;
    /// |mass - 1| of the raw convolution, before clamping and renormalization.
    double drift = 0.0;
    /// Grid refinement factor that was needed to bring the drift under tolerance.
    int refinement = 1;
};

/// Density of X + Y for independent X ~ f, Y ~ g via a zero-padded FFT.
[[nodiscard]] Convolution convolve_detailed(const GridDensity& f, const GridDensity& g);
[[nodiscard]] GridDensity convolve(const GridDensity& f, const GridDensity& g);

struct LogConcavity {
    bool log_concave = true;
    double worst_violation = 0.0;
    /// Fewer than three usable points: vacuously log-concave.
    bool degenerate = false;
};

[[nodiscard]] LogConcavity is_log_concave(const GridDensity& f, double tol = 1e-6);

/// Share of \int f^r carried by the outer 1% of the support on each side where
/// f has decayed below 1e-3 max f; large values mean truncated tails dominate.
[[nodiscard]] double tail_sensitivity(const GridDensity& f, double r);

// Density CSV: `x,f` rows, optional header, strictly increasing uniform x.
[[nodiscard]] GridDensity read_density_csv(std::istream& in);
[[nodiscard]] GridDensity read_density_csv_file(const std::string& path);
void write_density_csv(std::ostream& out, const GridDensity& f);

} // namespace renyi
