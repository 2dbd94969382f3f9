#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference and an
// OpenMP version; the library calls the parallel one, tests compare the two.
// Parallel reductions sum fixed-size blocks and then the block partials in
// order, so results do not depend on the thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace renyi::kernels {

inline constexpr std::size_t kReductionBlock = 2048;

/// Trapezoid sums over samples f_i >= floor of
///   e_i = exp(r * log f_i - log_shift) * (log f_i - center)^k,  k = 0, 1, 2.
/// The step factor is left to the caller.
struct LogSums {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
};

/// Largest log f_i over samples above floor; -inf when none.
[[nodiscard]] double max_log(std::span<const double> f, double floor);

namespace serial {
[[nodiscard]] LogSums log_sums(std::span<const double> f, double r, double log_shift,
                               double center, double floor);
/// out[k] = sum_i a[i] * b[k - i]; out.size() == a.size() + b.size() - 1.
void convolve_direct(std::span<const double> a, std::span<const double> b, std::span<double> out);
} // namespace serial

namespace parallel {
[[nodiscard]] LogSums log_sums(std::span<const double> f, double r, double log_shift,
                               double center, double floor);
void convolve_direct(std::span<const double> a, std::span<const double> b, std::span<double> out);
} // namespace parallel

/// Exhaustive search over the simplex grid {k / divisions} in m coordinates,
/// strictly positive entries only (m in {2, 3}). Ties keep the first point in
/// lexicographic order.
struct SimplexMinimum {
    std::vector<double> argmin;
    double value = 0.0;
    std::size_t evaluations = 0;
};

using SimplexObjective = std::function<double(std::span<const double>)>;

namespace serial {
[[nodiscard]] SimplexMinimum simplex_grid_min(std::size_t m, std::size_t divisions,
                                              const SimplexObjective& objective);
} // namespace serial

namespace parallel {
[[nodiscard]] SimplexMinimum simplex_grid_min(std::size_t m, std::size_t divisions,
                                              const SimplexObjective& objective);
} // namespace parallel

/// Number of threads the parallel kernels use (1 without OpenMP).
[[nodiscard]] int thread_count();

} // namespace renyi::kernels
