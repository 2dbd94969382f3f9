#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "renyi/densities.hpp"

namespace testing {

inline std::vector<renyi::AnalyticFamily> corpus() {
    return {renyi::Gaussian{1.0}, renyi::Uniform{0.0, 1.0}, renyi::Exponential{1.0}, renyi::Laplace{1.0}};
}

inline renyi::GridDensity grid(const renyi::AnalyticFamily& fam, double min_order = 1.0) {
    renyi::GridOptions o;
    o.min_order = min_order;
    return renyi::make_analytic(fam, o);
}

// Samples an arbitrary density on [lo, hi] and normalizes it.
inline renyi::GridDensity sampled(const std::function<double(double)>& pdf, double lo, double hi,
                                  std::size_t n = 8192) {
    std::vector<double> v(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = pdf(lo + static_cast<double>(i) * h);
    return renyi::normalize(renyi::GridDensity(lo, hi, std::move(v)));
}

inline double normal_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

// max |f(x_i) - ref(x_i)| over the grid of f, optionally restricted to [lo, hi].
inline double sup_error(const renyi::GridDensity& f, const std::function<double(double)>& ref,
                        double lo = -INFINITY, double hi = INFINITY) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.x(i);
        if (x < lo || x > hi) continue;
        worst = std::max(worst, std::abs(f[i] - ref(x)));
    }
    return worst;
}

} // namespace testing
