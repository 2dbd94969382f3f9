#include "renyi/epi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "renyi/densities.hpp"
#include "renyi/error.hpp"
#include "renyi/measures.hpp"

namespace renyi {

namespace {

constexpr double kSimplexSumTolerance = 1e-12;
constexpr double kOrderConstraintTolerance = 1e-9;
constexpr double kFormAgreement = 1e-10;
constexpr std::size_t kMaxPipelineTerms = 8;

void require_r_above_one(double r, const char* what) {
    if (!(r > 1.0) || !std::isfinite(r)) throw DomainError(std::string(what) + " requires r > 1");
}

void require_m(std::size_t m) {
    if (m < 2) throw DomainError("m must be >= 2");
}

double log2(double x) { return std::log(x) / std::numbers::ln2; }

// Both algebraic forms of A(lambda); throws if they disagree.
double a_of_weights(double r, std::span<const double> lambda) {
    const double rc = conjugate(r);
    const double abs_rc = std::abs(rc);

    double first = std::log(r) / r;
    for (double l : lambda) {
        const double rci = rc / l;
        const double ri = rci / (rci - 1.0);
        first -= std::log(ri) / ri;
    }
    first *= abs_rc;

    auto xlogx = [](double x) { return x * std::log(x); };
    double second = -xlogx(1.0 - 1.0 / rc);
    for (double l : lambda) second += xlogx(1.0 - l / rc);
    second *= abs_rc;

    if (std::abs(first - second) > kFormAgreement * std::max(1.0, std::abs(first)))
        throw std::logic_error("A(lambda): the two closed forms disagree");
    return first;
}

double entropy_of(std::span<const double> lambda) {
    double h = 0.0;
    for (double l : lambda) {
        if (l > 0.0) h -= l * std::log(l);
    }
    return h;
}

void check_pipeline_size(std::size_t m) {
    if (m == 0) throw ParameterError("need at least one density");
    if (m > kMaxPipelineTerms) throw ParameterError("density pipelines support at most 8 terms");
}

GridDensity sum_all(std::vector<GridDensity> parts) {
    GridDensity acc = std::move(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) acc = convolve(acc, parts[i]);
    return acc;
}

ConstantsRecord make_record(double c, double alpha, double r, std::size_t m, std::vector<double> lambda,
                            std::vector<double> orders, std::string source) {
    ConstantsRecord rec;
    rec.c = c;
    rec.alpha = alpha;
    rec.r = r;
    rec.m = m;
    rec.lambda = std::move(lambda);
    rec.orders = std::move(orders);
    rec.source = std::move(source);
    return rec;
}

} // namespace

// ---------------------------------------------------------------------------

LambdaWeights::LambdaWeights(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.size() < 2) throw SimplexError("lambda needs at least two weights");
    double sum = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || !(w > 0.0) || !(w < 1.0)) throw SimplexError("lambda weights must lie in (0, 1)");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTolerance) throw SimplexError("lambda weights must sum to 1");
}

LambdaWeights LambdaWeights::uniform(std::size_t m) {
    return LambdaWeights(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

double LambdaWeights::entropy() const noexcept { return entropy_of(weights_); }

LambdaWeights lambda_from_orders(double r, std::span<const double> orders) {
    const double rc = conjugate(r);
    if (orders.size() < 2) throw HypothesisError("need at least two orders");
    double inv_sum = 0.0;
    std::vector<double> w;
    w.reserve(orders.size());
    for (double ri : orders) {
        if (!(ri > 0.0) || !std::isfinite(ri)) throw OrderError("orders must be finite and > 0");
        if (ri == 1.0) throw HypothesisError("order 1 has no conjugate");
        if ((ri > 1.0) != (r > 1.0)) throw HypothesisError("conjugate exponents must all have the same sign");
        const double rci = conjugate(ri);
        inv_sum += 1.0 / rci;
        w.push_back(rc / rci);
    }
    if (std::abs(inv_sum - 1.0 / rc) > kOrderConstraintTolerance)
        throw HypothesisError("orders violate sum 1/r'_i = 1/r'");
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return LambdaWeights(std::move(w));
}

std::vector<double> orders_from_lambda(double r, const LambdaWeights& lambda) {
    const double rc = conjugate(r);
    std::vector<double> out;
    out.reserve(lambda.size());
    for (double l : lambda.weights()) {
        const double rci = rc / l;
        out.push_back(rci / (rci - 1.0));
    }
    return out;
}

double a_of_lambda(double r, const LambdaWeights& lambda) { return a_of_weights(r, lambda.weights()); }

// ---------------------------------------------------------------------------

double c_ram_sason(double r, std::size_t m) {
    require_r_above_one(r, "c_ram_sason");
    require_m(m);
    const double rc = conjugate(r);
    const double mr = static_cast<double>(m) * rc;
    return std::pow(r, rc / r) * std::pow(1.0 - 1.0 / mr, mr - 1.0);
}

double c_bobkov_chistyakov(double r) {
    require_r_above_one(r, "c_bobkov_chistyakov");
    return std::pow(r, conjugate(r) / r) / std::numbers::e;
}

double alpha_li(double r) {
    require_r_above_one(r, "alpha_li");
    const double rc = conjugate(r);
    // r' log r = r log1p(r - 1) / (r - 1) keeps precision as r -> 1.
    const double rc_log_r = r * std::log1p(r - 1.0) / (r - 1.0);
    const double bracket = 1.0 + rc_log_r / (r * std::numbers::ln2) +
                           (2.0 * rc - 1.0) * std::log1p(-1.0 / (2.0 * rc)) / std::numbers::ln2;
    return 1.0 / bracket;
}

double alpha_bm(double r) {
    require_r_above_one(r, "alpha_bm");
    return 0.5 * (r + 1.0);
}

double c_new_repi(double r, std::size_t m, double alpha) {
    require_r_above_one(r, "c_new_repi");
    require_m(m);
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("c_new_repi requires 0 < alpha < 1");
    const double md = static_cast<double>(m);
    return std::pow(md * c_ram_sason(r, m), alpha) / md;
}

LogConcaveConstants logconcave_constants(double r, std::size_t m, std::optional<double> alpha) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("log-concave constants require 0 < r < 1");
    require_m(m);
    const double rc = conjugate(r);
    const double abs_rc = -rc;
    const double mr = static_cast<double>(m) * rc;
    LogConcaveConstants out;
    out.c_lc = std::pow(r, -rc / r) * std::pow(1.0 - 1.0 / mr, 1.0 - mr);
    out.alpha_lc = 1.0 / (1.0 + abs_rc * log2(r) / r + (2.0 * abs_rc + 1.0) * log2(1.0 + 1.0 / (2.0 * abs_rc)));
    if (alpha) {
        if (!(*alpha > 0.0 && *alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
        const double md = static_cast<double>(m);
        out.c_lc_alpha = std::pow(md * out.c_lc, *alpha) / md;
    }
    return out;
}

// ---------------------------------------------------------------------------

LambdaSearch lambda_minimize(double r, std::size_t m, SimplexObjectiveKind objective, double step, double alpha) {
    if (m != 2 && m != 3) throw ParameterError("lambda search supports m = 2 or 3");
    if (!(step > 0.0 && step <= 1e-2)) throw ParameterError("lambda search step must lie in (0, 1e-2]");
    if (r == 1.0) throw OrderError("lambda search needs r != 1");
    if (objective == SimplexObjectiveKind::AMinusH && !(alpha > 0.0 && alpha < 1.0))
        throw DomainError("A - H objective requires 0 < alpha < 1");

    auto divisions = static_cast<std::size_t>(std::ceil(1.0 / step - 1e-9));
    divisions = ((divisions + m - 1) / m) * m;

    const kernels::SimplexObjective fn = [&](std::span<const double> l) {
        const double a = a_of_weights(r, l);
        if (objective == SimplexObjectiveKind::A) return a;
        return alpha * a - (1.0 - alpha) * entropy_of(l);
    };
    const auto best = kernels::parallel::simplex_grid_min(m, divisions, fn);

    double closed = 0.0;
    if (r > 1.0) {
        closed = objective == SimplexObjectiveKind::A ? std::log(c_ram_sason(r, m))
                                                      : std::log(c_new_repi(r, m, alpha));
    } else {
        const auto lc = logconcave_constants(r, m, objective == SimplexObjectiveKind::AMinusH
                                                       ? std::optional<double>(alpha)
                                                       : std::nullopt);
        closed = objective == SimplexObjectiveKind::A ? std::log(lc.c_lc) : std::log(*lc.c_lc_alpha);
    }

    LambdaSearch out{LambdaWeights(best.argmin)};
    out.minimum = best.value;
    out.closed_form = closed;
    out.step = 1.0 / static_cast<double>(divisions);
    out.evaluations = best.evaluations;
    const double uniform = 1.0 / static_cast<double>(m);
    for (double l : best.argmin) out.argmin_distance = std::max(out.argmin_distance, std::abs(l - uniform));
    out.consistent = out.argmin_distance <= out.step + 1e-12 &&
                     std::abs(out.minimum - closed) <= 1e-6 * std::abs(closed) + 1e-15;
    return out;
}

std::string to_string(InequalityId id) {
    switch (id) {
    case InequalityId::repic: return "repic";
    case InequalityId::repialpha: return "repialpha";
    case InequalityId::repig: return "repig";
    case InequalityId::dct: return "dct";
    }
    return "unknown";
}

double inequality_tolerance(double rhs) { return std::max(1e-4, 1e-3 * std::abs(rhs)); }

// ---------------------------------------------------------------------------

GridDensity weighted_sum(std::span<const GridDensity> densities, const LambdaWeights& lambda) {
    check_pipeline_size(densities.size());
    if (densities.size() != lambda.size()) throw ParameterError("need one lambda weight per density");
    std::vector<GridDensity> parts;
    parts.reserve(densities.size());
    for (std::size_t i = 0; i < densities.size(); ++i) parts.push_back(scale_rv(densities[i], std::sqrt(lambda[i])));
    return sum_all(std::move(parts));
}

GridDensity plain_sum(std::span<const GridDensity> densities) {
    check_pipeline_size(densities.size());
    return sum_all(std::vector<GridDensity>(densities.begin(), densities.end()));
}

double linearized_gap(std::span<const GridDensity> densities, const LambdaWeights& lambda, const RenyiOrder& r,
                      std::optional<std::span<const double>> per_density_orders) {
    if (densities.size() != lambda.size()) throw ParameterError("need one lambda weight per density");
    if (per_density_orders) {
        if (per_density_orders->size() != densities.size()) throw ParameterError("need one order per density");
        const auto implied = lambda_from_orders(r.value(), *per_density_orders);
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            if (std::abs(implied[i] - lambda[i]) > kOrderConstraintTolerance)
                throw HypothesisError("orders do not match the given lambda");
        }
    }
    const double h_sum = renyi_entropy(weighted_sum(densities, lambda), r);
    double weighted = 0.0;
    for (std::size_t i = 0; i < densities.size(); ++i) {
        const RenyiOrder ri = per_density_orders ? RenyiOrder((*per_density_orders)[i]) : r;
        weighted += lambda[i] * renyi_entropy(densities[i], ri);
    }
    return h_sum - weighted;
}

double dct_gaussian_bound(double r, std::span<const double> orders) {
    const double rc = conjugate(r);
    double s = std::log(r) / r;
    for (double ri : orders) s -= std::log(ri) / ri;
    return 0.5 * rc * s;
}

EpiReport check_dct(std::span<const GridDensity> densities, double r, std::span<const double> orders) {
    const auto lambda = lambda_from_orders(r, orders);
    EpiReport rep;
    rep.inequality_id = InequalityId::dct;
    rep.lhs = linearized_gap(densities, lambda, RenyiOrder(r), orders);
    rep.rhs = dct_gaussian_bound(r, orders);
    rep.gap = rep.lhs - rep.rhs;
    rep.tol = inequality_tolerance(rep.rhs);
    rep.pass = rep.gap >= -rep.tol;
    rep.constants = make_record(1.0, 1.0, r, densities.size(),
                                std::vector<double>(lambda.weights().begin(), lambda.weights().end()),
                                std::vector<double>(orders.begin(), orders.end()), "gaussian-bound");
    return rep;
}

EpiReport check_repig(std::span<const GridDensity> densities, double r, double c, double alpha, InequalityId id,
                      std::string source) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("c must be > 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be > 0");
    const RenyiOrder order(r);
    std::vector<double> powers;
    double sum_powers = 0.0;
    for (const auto& f : densities) {
        powers.push_back(std::pow(entropy_power(f, order), alpha));
        sum_powers += powers.back();
    }
    EpiReport rep;
    rep.inequality_id = id;
    rep.lhs = std::pow(entropy_power(plain_sum(densities), order), alpha);
    rep.rhs = c * sum_powers;
    rep.gap = rep.lhs - rep.rhs;
    rep.tol = inequality_tolerance(rep.rhs);
    rep.pass = rep.gap >= -rep.tol;
    for (double& p : powers) p /= sum_powers;
    rep.constants = make_record(c, alpha, r, densities.size(), std::move(powers), {}, std::move(source));
    return rep;
}

LinearizationCheck linearization_converse(std::span<const GridDensity> densities, double r, double c,
                                          double alpha) {
    if (!(c > 0.0) || !(alpha > 0.0)) throw ParameterError("c and alpha must be > 0");
    const RenyiOrder order(r);
    check_pipeline_size(densities.size());

    std::vector<double> powers;
    double sum_powers = 0.0;
    for (const auto& f : densities) {
        powers.push_back(std::pow(entropy_power(f, order), alpha));
        sum_powers += powers.back();
    }
    std::vector<double> weights = powers;
    for (double& w : weights) w /= sum_powers;
    const LambdaWeights lambda(weights);

    LinearizationCheck out;
    out.lambda = weights;

    const double lhs = std::pow(entropy_power(plain_sum(densities), order), alpha);
    const double rhs = c * sum_powers;
    out.log_gap = std::log(lhs) - std::log(rhs);
    out.multiplicative_pass = lhs - rhs >= -inequality_tolerance(rhs);

    std::vector<GridDensity> ys;
    for (std::size_t i = 0; i < densities.size(); ++i) ys.push_back(scale_rv(densities[i], 1.0 / std::sqrt(weights[i])));
    out.linearized_lhs = linearized_gap(ys, lambda, order);
    out.linearized_rhs = 0.5 * (std::log(c) / alpha + (1.0 / alpha - 1.0) * lambda.entropy());
    out.linearized_pass = out.linearized_lhs - out.linearized_rhs >= -inequality_tolerance(out.linearized_rhs);
    return out;
}

LinearizationCheck linearization_forward(std::span<const GridDensity> densities, const LambdaWeights& lambda,
                                         double r, double c, double alpha) {
    if (!(c > 0.0) || !(alpha > 0.0)) throw ParameterError("c and alpha must be > 0");
    if (densities.size() != lambda.size()) throw ParameterError("need one lambda weight per density");
    const RenyiOrder order(r);

    LinearizationCheck out;
    out.lambda.assign(lambda.weights().begin(), lambda.weights().end());

    std::vector<GridDensity> zs;
    double sum_powers = 0.0;
    for (std::size_t i = 0; i < densities.size(); ++i) {
        zs.push_back(scale_rv(densities[i], std::sqrt(lambda[i])));
        sum_powers += std::pow(entropy_power(zs.back(), order), alpha);
    }
    const double lhs = std::pow(entropy_power(plain_sum(zs), order), alpha);
    const double rhs = c * sum_powers;
    out.log_gap = std::log(lhs) - std::log(rhs);
    out.multiplicative_pass = lhs - rhs >= -inequality_tolerance(rhs);

    out.linearized_lhs = linearized_gap(densities, lambda, order);
    out.linearized_rhs = 0.5 * (std::log(c) / alpha + (1.0 / alpha - 1.0) * lambda.entropy());
    out.linearized_pass = out.linearized_lhs - out.linearized_rhs >= -inequality_tolerance(out.linearized_rhs);
    return out;
}

} // namespace renyi
