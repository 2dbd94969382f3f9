#include "renyi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace renyi::kernels {

namespace {

inline double trapezoid_weight(std::size_t i, std::size_t n) noexcept {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

LogSums block_log_sums(std::span<const double> f, std::size_t begin, std::size_t end, double r,
                       double log_shift, double center, double floor) noexcept {
    LogSums s;
    const std::size_t n = f.size();
    for (std::size_t i = begin; i < end; ++i) {
        const double v = f[i];
        if (v < floor) continue;
        const double lv = std::log(v);
        const double e = trapezoid_weight(i, n) * std::exp(r * lv - log_shift);
        const double d = lv - center;
        s.s0 += e;
        s.s1 += e * d;
        s.s2 += e * d * d;
    }
    return s;
}

std::vector<double> simplex_point(std::size_t m, std::size_t divisions, std::size_t i, std::size_t j) {
    const double n = static_cast<double>(divisions);
    if (m == 2) return {static_cast<double>(i) / n, static_cast<double>(divisions - i) / n};
    return {static_cast<double>(i) / n, static_cast<double>(j) / n,
            static_cast<double>(divisions - i - j) / n};
}

void check_simplex_args(std::size_t m, std::size_t divisions) {
    if (m != 2 && m != 3) throw std::invalid_argument("simplex grid search supports m = 2 or 3");
    if (divisions < m) throw std::invalid_argument("simplex grid needs at least m divisions");
}

// Best point with first coordinate index i (inner loop over the remaining free index).
struct RowBest {
    double value = std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    std::size_t count = 0;
};

RowBest scan_row(std::size_t m, std::size_t divisions, std::size_t i, const SimplexObjective& objective) {
    RowBest best;
    if (m == 2) {
        const auto p = simplex_point(2, divisions, i, 0);
        best.value = objective(p);
        best.count = 1;
        return best;
    }
    for (std::size_t j = 1; i + j < divisions; ++j) {
        const auto p = simplex_point(3, divisions, i, j);
        const double v = objective(p);
        ++best.count;
        if (v < best.value) {
            best.value = v;
            best.j = j;
        }
    }
    return best;
}

SimplexMinimum reduce_rows(std::size_t m, std::size_t divisions, const std::vector<RowBest>& rows) {
    SimplexMinimum out;
    out.value = std::numeric_limits<double>::infinity();
    std::size_t best_i = 1;
    std::size_t best_j = 1;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.evaluations += rows[k].count;
        if (rows[k].count > 0 && rows[k].value < out.value) {
            out.value = rows[k].value;
            best_i = k + 1;
            best_j = rows[k].j;
        }
    }
    out.argmin = simplex_point(m, divisions, best_i, best_j);
    return out;
}

} // namespace

double max_log(std::span<const double> f, double floor) {
    double best = -std::numeric_limits<double>::infinity();
    for (double v : f) {
        if (v >= floor) best = std::max(best, std::log(v));
    }
    return best;
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

LogSums log_sums(std::span<const double> f, double r, double log_shift, double center, double floor) {
    return block_log_sums(f, 0, f.size(), r, log_shift, center, floor);
}

void convolve_direct(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    if (a.empty() || b.empty() || out.size() != a.size() + b.size() - 1)
        throw std::invalid_argument("convolve_direct: output must have size |a| + |b| - 1");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
}

SimplexMinimum simplex_grid_min(std::size_t m, std::size_t divisions, const SimplexObjective& objective) {
    check_simplex_args(m, divisions);
    const std::size_t rows = divisions - (m == 2 ? 1 : 2);
    std::vector<RowBest> best(rows);
    for (std::size_t k = 0; k < rows; ++k) best[k] = scan_row(m, divisions, k + 1, objective);
    return reduce_rows(m, divisions, best);
}

} // namespace serial

namespace parallel {

LogSums log_sums(std::span<const double> f, double r, double log_shift, double center, double floor) {
    const std::size_t n = f.size();
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<LogSums> partial(blocks);
    const auto nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < nb; ++b) {
        const auto begin = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t end = std::min(n, begin + kReductionBlock);
        partial[static_cast<std::size_t>(b)] = block_log_sums(f, begin, end, r, log_shift, center, floor);
    }
    LogSums s;
    for (const auto& p : partial) {
        s.s0 += p.s0;
        s.s1 += p.s1;
        s.s2 += p.s2;
    }
    return s;
}

void convolve_direct(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    if (a.empty() || b.empty() || out.size() != a.size() + b.size() - 1)
        throw std::invalid_argument("convolve_direct: output must have size |a| + |b| - 1");
    const auto na = static_cast<long long>(a.size());
    const auto nbv = static_cast<long long>(b.size());
    const auto nout = static_cast<long long>(out.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (long long k = 0; k < nout; ++k) {
        const long long lo = std::max(0LL, k - nbv + 1);
        const long long hi = std::min(k, na - 1);
        double s = 0.0;
        for (long long i = lo; i <= hi; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k - i)];
        out[static_cast<std::size_t>(k)] = s;
    }
}

SimplexMinimum simplex_grid_min(std::size_t m, std::size_t divisions, const SimplexObjective& objective) {
    check_simplex_args(m, divisions);
    const std::size_t rows = divisions - (m == 2 ? 1 : 2);
    std::vector<RowBest> best(rows);
    const auto nrows = static_cast<long long>(rows);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long k = 0; k < nrows; ++k)
        best[static_cast<std::size_t>(k)] = scan_row(m, divisions, static_cast<std::size_t>(k) + 1, objective);
    return reduce_rows(m, divisions, best);
}

} // namespace parallel

} // namespace renyi::kernels
