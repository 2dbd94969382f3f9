#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renyi/grid_density.hpp"
#include "renyi/kernels.hpp"
#include "renyi/order.hpp"

namespace renyi {

/// A point in the open probability simplex (m >= 2, all weights > 0).
class LambdaWeights {
public:
    explicit LambdaWeights(std::vector<double> weights);

    static LambdaWeights uniform(std::size_t m);

    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return weights_[i]; }

    /// Shannon entropy in nats.
    [[nodiscard]] double entropy() const noexcept;

private:
    std::vector<double> weights_;
};

/// lambda_i = r' / r'_i. Requires all conjugates of the same sign and
/// sum 1/r'_i = 1/r' (within 1e-9); throws HypothesisError otherwise.
[[nodiscard]] LambdaWeights lambda_from_orders(double r, std::span<const double> orders);
/// r'_i = r' / lambda_i, r_i = r'_i / (r'_i - 1).
[[nodiscard]] std::vector<double> orders_from_lambda(double r, const LambdaWeights& lambda);

/// A(lambda) = |r'| (log r / r - sum log r_i / r_i), evaluated in both algebraic
/// forms; throws std::logic_error if they disagree beyond 1e-10.
[[nodiscard]] double a_of_lambda(double r, const LambdaWeights& lambda);

// Optimal constants (r > 1).
[[nodiscard]] double c_ram_sason(double r, std::size_t m);
[[nodiscard]] double c_bobkov_chistyakov(double r);
[[nodiscard]] double alpha_li(double r);
[[nodiscard]] double alpha_bm(double r);
[[nodiscard]] double c_new_repi(double r, std::size_t m, double alpha);

// Log-concave constants (0 < r < 1).
struct LogConcaveConstants {
    double c_lc = 0.0;
    double alpha_lc = 0.0;
    std::optional<double> c_lc_alpha;
};
[[nodiscard]] LogConcaveConstants logconcave_constants(double r, std::size_t m,
                                                       std::optional<double> alpha = std::nullopt);

enum class SimplexObjectiveKind { A, AMinusH };

struct LambdaSearch {
    LambdaWeights argmin;
    double minimum = 0.0;
    double closed_form = 0.0;          // log of the matching optimal constant
    double argmin_distance = 0.0;      // max |lambda_i - 1/m|
    double step = 0.0;                 // effective grid step
    bool consistent = false;           // argmin within step, minimum within 1e-6 relative
    std::size_t evaluations = 0;
};

/// Exhaustive simplex grid search of A(lambda) or alpha A(lambda) - (1 - alpha) H(lambda).
/// The grid resolution is rounded up so that the uniform point is a node.
[[nodiscard]] LambdaSearch lambda_minimize(double r, std::size_t m, SimplexObjectiveKind objective,
                                           double step, double alpha = 1.0);

enum class InequalityId { repic, repialpha, repig, dct };
[[nodiscard]] std::string to_string(InequalityId id);

struct ConstantsRecord {
    double c = 1.0;
    double alpha = 1.0;
    double r = 0.0;
    std::size_t m = 0;
    std::vector<double> lambda;
    std::vector<double> orders;
    std::string source;  // which closed form the constants came from
};

struct EpiReport {
    InequalityId inequality_id = InequalityId::repig;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double tol = 0.0;
    bool pass = false;
    ConstantsRecord constants;
};

/// pass iff gap >= -max(1e-4, 1e-3 |rhs|).
[[nodiscard]] double inequality_tolerance(double rhs);

/// h_r(sum sqrt(lambda_i) X_i) - sum lambda_i h_{r_i}(X_i), with r_i = r when no orders are given.
[[nodiscard]] double linearized_gap(std::span<const GridDensity> densities, const LambdaWeights& lambda,
                                    const RenyiOrder& r,
                                    std::optional<std::span<const double>> per_density_orders = std::nullopt);

/// Density of sum sqrt(lambda_i) X_i.
[[nodiscard]] GridDensity weighted_sum(std::span<const GridDensity> densities, const LambdaWeights& lambda);
/// Density of X_1 + ... + X_m.
[[nodiscard]] GridDensity plain_sum(std::span<const GridDensity> densities);

/// Gaussian lower bound (r'/2)(log r / r - sum log r_i / r_i) for one dimension.
[[nodiscard]] double dct_gaussian_bound(double r, std::span<const double> orders);

[[nodiscard]] EpiReport check_dct(std::span<const GridDensity> densities, double r,
                                  std::span<const double> orders);

/// N_r^alpha(sum X_i) >= c sum N_r^alpha(X_i).
[[nodiscard]] EpiReport check_repig(std::span<const GridDensity> densities, double r, double c,
                                    double alpha, InequalityId id = InequalityId::repig,
                                    std::string source = "explicit");

/// Linearization equivalence at the weights lambda_i = N_r^alpha(X_i) / sum_j N_r^alpha(X_j):
/// the multiplicative check and the additive check are computed independently.
struct LinearizationCheck {
    std::vector<double> lambda;
    double log_gap = 0.0;            // log lhs - log rhs of the multiplicative form
    double linearized_lhs = 0.0;     // h_r(sum sqrt(l_i) Y_i) - sum l_i h_r(Y_i)
    double linearized_rhs = 0.0;     // (log c / alpha + (1/alpha - 1) H(lambda)) / 2
    bool multiplicative_pass = false;
    bool linearized_pass = false;
};

/// Converse direction: Y_i = X_i / sqrt(lambda_i) so that sum sqrt(lambda_i) Y_i = sum X_i.
[[nodiscard]] LinearizationCheck linearization_converse(std::span<const GridDensity> densities, double r,
                                                        double c, double alpha);
/// Forward direction at a given lambda: the multiplicative form for sqrt(lambda_i) X_i
/// and the additive form for X_i.
[[nodiscard]] LinearizationCheck linearization_forward(std::span<const GridDensity> densities,
                                                       const LambdaWeights& lambda, double r, double c,
                                                       double alpha);

} // namespace renyi
