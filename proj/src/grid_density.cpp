#include "renyi/grid_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "renyi/error.hpp"

namespace renyi {

GridDensity::GridDensity(double x_min, double x_max, std::vector<double> values,
                         double omitted_tail_mass)
    : x_min_(x_min), x_max_(x_max), step_(0.0), values_(std::move(values)),
      omitted_tail_mass_(omitted_tail_mass) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
        throw GridError("grid needs finite x_min < x_max");
    if (values_.size() < kMinGridLen)
        throw GridError("grid needs at least " + std::to_string(kMinGridLen) + " points, got " +
                        std::to_string(values_.size()));
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) throw GridError("density values must be finite and >= 0");
    }
    step_ = (x_max - x_min) / static_cast<double>(values_.size() - 1);
}

double GridDensity::x(std::size_t i) const noexcept {
    if (i + 1 == values_.size()) return x_max_;
    return x_min_ + static_cast<double>(i) * step_;
}

double GridDensity::operator()(double x) const noexcept {
    if (!(x >= x_min_ && x <= x_max_)) return 0.0;
    const double pos = (x - x_min_) / step_;
    auto i = static_cast<std::size_t>(pos);
    if (i >= values_.size() - 1) return values_.back();
    const double t = pos - static_cast<double>(i);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

double GridDensity::integrate(std::span<const double> samples) const noexcept {
    if (samples.empty()) return 0.0;
    double s = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) s += samples[i];
    return s * step_;
}

double GridDensity::mass() const noexcept { return integrate(values_); }

double GridDensity::max_value() const noexcept {
    return *std::max_element(values_.begin(), values_.end());
}

bool GridDensity::is_normalized(double tol) const noexcept { return std::abs(mass() - 1.0) <= tol; }

} // namespace renyi
