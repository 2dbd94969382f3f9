#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "renyi/densities.hpp"
#include "renyi/epi.hpp"
#include "renyi/error.hpp"
#include "renyi/measures.hpp"
#include "support.hpp"

using namespace renyi;
using testing::grid;

TEST_CASE("conjugate") {
    CHECK(conjugate(2.0) == 2.0);
    CHECK(conjugate(4.0 / 3.0) == doctest::Approx(4.0));
    CHECK(conjugate(0.5) == -1.0);
    CHECK_THROWS_AS((void)conjugate(1.0), OrderError);
    CHECK_THROWS_AS((void)RenyiOrder(1.0).conjugate(), OrderError);
}

TEST_CASE("lambda_from_orders") {
    const std::vector<double> a{4.0 / 3.0, 4.0 / 3.0};
    const auto la = lambda_from_orders(2.0, a);
    CHECK(la[0] == doctest::Approx(0.5));
    CHECK(la[1] == doctest::Approx(0.5));

    const std::vector<double> b{2.0 / 3.0, 2.0 / 3.0};
    const auto lb = lambda_from_orders(0.5, b);
    CHECK(lb[0] == doctest::Approx(0.5));

    const std::vector<double> bad{1.5, 2.0};
    CHECK_THROWS_AS((void)lambda_from_orders(2.0, bad), HypothesisError);
    const std::vector<double> mixed{0.8, 3.0};
    CHECK_THROWS_AS((void)lambda_from_orders(2.0, mixed), HypothesisError);
}

TEST_CASE("orders_from_lambda") {
    const auto o = orders_from_lambda(2.0, LambdaWeights::uniform(2));
    CHECK(o[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    const auto o2 = orders_from_lambda(0.5, LambdaWeights::uniform(2));
    CHECK(o2[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    const double eps = 1e-6;
    const auto edge = orders_from_lambda(2.0, LambdaWeights({1.0 - eps, eps}));
    CHECK(edge[0] == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(edge[0] < 2.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int k = 0; k < 20; ++k) {
        const double a = u(rng);
        const LambdaWeights l({a, 1.0 - a});
        for (double r : {0.5, 2.0, 3.0}) {
            const auto back = lambda_from_orders(r, orders_from_lambda(r, l));
            CHECK(std::abs(back[0] - l[0]) < 1e-12);
        }
    }
    CHECK_THROWS_AS(LambdaWeights({0.0, 1.0}), SimplexError);
    CHECK_THROWS_AS(LambdaWeights({0.5, 0.6}), SimplexError);
    CHECK_THROWS_AS(LambdaWeights({1.0}), SimplexError);
}

TEST_CASE("a_of_lambda") {
    const double expected = 2.0 * (1.5 * std::log(0.75) - 0.5 * std::log(0.5));
    CHECK(a_of_lambda(2.0, LambdaWeights::uniform(2)) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(a_of_lambda(2.0, LambdaWeights::uniform(2)) == doctest::Approx(-0.169899036795).epsilon(1e-11));
    CHECK(a_of_lambda(0.5, LambdaWeights::uniform(2)) ==
          doctest::Approx(3.0 * std::log(1.5) - 2.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(std::abs(a_of_lambda(2.0, LambdaWeights({1.0 - 1e-9, 1e-9}))) < 1e-6);
}

TEST_CASE("a_of_lambda is negative and strictly convex on the simplex") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (double r : {0.5, 1.5, 2.0, 4.0}) {
        for (int k = 0; k < 200; ++k) {
            double a = u(rng), b = u(rng);
            const double c = u(rng), d = u(rng);
            // Random points on the 3-simplex.
            const double s1 = a + b + c;
            const double s2 = b + c + d;
            const LambdaWeights p({a / s1, b / s1, c / s1});
            const LambdaWeights q({b / s2, c / s2, d / s2});
            const LambdaWeights mid({0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 1.0 - 0.5 * (p[0] + q[0]) - 0.5 * (p[1] + q[1])});
            const double ap = a_of_lambda(r, p);
            const double aq = a_of_lambda(r, q);
            CHECK(ap < 0.0);
            CHECK(a_of_lambda(r, mid) <= 0.5 * (ap + aq) - 1e-12);
        }
    }
}

TEST_CASE("c_ram_sason") {
    CHECK(c_ram_sason(2.0, 2) == 27.0 / 32.0);
    CHECK(c_ram_sason(2.0, 3) == doctest::Approx(0.803755144033).epsilon(1e-11));
    CHECK(std::abs(c_ram_sason(1.0 + 1e-6, 2) - 1.0) < 1e-4);
    for (double r : {1.5, 2.0, 4.0})
        for (std::size_t m = 2; m < 50; ++m) CHECK(c_ram_sason(r, m + 1) < c_ram_sason(r, m));
    CHECK_THROWS_AS((void)c_ram_sason(1.0, 2), DomainError);
    CHECK_THROWS_AS((void)c_ram_sason(0.5, 2), DomainError);
    CHECK_THROWS_AS((void)c_ram_sason(2.0, 1), DomainError);
}

TEST_CASE("c_bobkov_chistyakov") {
    CHECK(std::abs(c_bobkov_chistyakov(2.0) - 2.0 / std::numbers::e) < 1e-12);
    const double gap = c_ram_sason(2.0, 10000) - 2.0 / std::numbers::e;
    CHECK(gap > 0.0);
    CHECK(gap < 1e-4);
    CHECK(c_bobkov_chistyakov(100.0) == doctest::Approx(0.385396297699).epsilon(1e-11));
    CHECK_THROWS_AS((void)c_bobkov_chistyakov(0.9), DomainError);
}

TEST_CASE("alpha_li and alpha_bm") {
    CHECK(alpha_li(2.0) == doctest::Approx(1.32470069664).epsilon(1e-10));
    CHECK(alpha_bm(2.0) == 1.5);
    CHECK(std::abs(alpha_li(1.0 + 1e-6) - 1.0) < 1e-3);
    for (int k = 1; k <= 50; ++k) {
        const double r = 1.0 + 9.0 * k / 50.0;
        CHECK(alpha_li(r) > 1.0);
        CHECK(alpha_li(r) < alpha_bm(r));
        // 1/alpha - 1 = A(1/2, 1/2) / log 2.
        CHECK(1.0 / alpha_li(r) - 1.0 ==
              doctest::Approx(a_of_lambda(r, LambdaWeights::uniform(2)) / std::log(2.0)).epsilon(1e-10));
    }
    CHECK_THROWS_AS((void)alpha_li(1.0), DomainError);
}

TEST_CASE("c_new_repi") {
    CHECK(c_new_repi(2.0, 2, 0.5) == doctest::Approx(0.649519052838).epsilon(1e-11));
    CHECK(c_new_repi(2.0, 3, 0.5) == doctest::Approx(0.517608328125).epsilon(1e-11));
    CHECK(c_new_repi(2.0, 2, 1.0 - 1e-9) == doctest::Approx(c_ram_sason(2.0, 2)).epsilon(1e-8));
    CHECK_THROWS_AS((void)c_new_repi(2.0, 2, 1.0), DomainError);
    CHECK_THROWS_AS((void)c_new_repi(2.0, 2, 0.0), DomainError);
}

TEST_CASE("logconcave_constants") {
    const auto lc = logconcave_constants(0.5, 2, 0.5);
    CHECK(lc.c_lc == doctest::Approx(0.84375).epsilon(1e-13));
    CHECK(lc.alpha_lc == doctest::Approx(1.32470069664).epsilon(1e-10));
    REQUIRE(lc.c_lc_alpha.has_value());
    CHECK(*lc.c_lc_alpha == doctest::Approx(0.649519052838).epsilon(1e-11));
    CHECK_FALSE(logconcave_constants(0.5, 2).c_lc_alpha.has_value());
    CHECK_THROWS_AS((void)logconcave_constants(1.0, 2), DomainError);
    CHECK_THROWS_AS((void)logconcave_constants(2.0, 2), DomainError);
    CHECK_THROWS_AS((void)logconcave_constants(0.5, 2, 1.5), DomainError);
}

TEST_CASE("lambda_minimize") {
    const auto a = lambda_minimize(2.0, 2, SimplexObjectiveKind::A, 1e-3);
    CHECK(a.consistent);
    CHECK(a.argmin[0] == doctest::Approx(0.5));
    CHECK(a.minimum == doctest::Approx(-0.169899036795).epsilon(1e-10));
    CHECK(a.minimum == doctest::Approx(std::log(27.0 / 32.0)).epsilon(1e-12));

    const auto ah = lambda_minimize(2.0, 2, SimplexObjectiveKind::AMinusH, 1e-3, 0.5);
    CHECK(ah.consistent);
    CHECK(ah.minimum == doctest::Approx(std::log(0.649519052838)).epsilon(1e-10));

    const auto lc = lambda_minimize(0.5, 2, SimplexObjectiveKind::A, 1e-3);
    CHECK(lc.consistent);
    CHECK(lc.minimum == doctest::Approx(-0.169899036795).epsilon(1e-10));

    for (double r : {0.3, 0.8, 1.5, 3.0}) {
        const auto m3 = lambda_minimize(r, 3, SimplexObjectiveKind::A, 5e-3);
        CAPTURE(r);
        CHECK(m3.consistent);
        const auto m3h = lambda_minimize(r, 3, SimplexObjectiveKind::AMinusH, 5e-3, 0.3);
        CHECK(m3h.consistent);
    }
    CHECK_THROWS_AS((void)lambda_minimize(2.0, 2, SimplexObjectiveKind::A, 0.05), ParameterError);
    CHECK_THROWS_AS((void)lambda_minimize(2.0, 4, SimplexObjectiveKind::A, 1e-3), ParameterError);
}

TEST_CASE("linearized_gap") {
    const auto g = grid(Gaussian{1.0});
    const std::vector<GridDensity> gg{g, g};
    const auto half = LambdaWeights::uniform(2);
    CHECK(std::abs(linearized_gap(gg, half, RenyiOrder(2.0))) < 1e-9);
    const std::vector<double> orders{4.0 / 3.0, 4.0 / 3.0};
    CHECK(linearized_gap(gg, half, RenyiOrder(2.0), orders) == doctest::Approx(-0.0849495183977).epsilon(1e-8));

    const auto u = grid(Uniform{0.0, 1.0});
    const std::vector<GridDensity> uu{u, u};
    CHECK(linearized_gap(uu, half, RenyiOrder(2.0)) == doctest::Approx(0.0588915178282).epsilon(1e-5));

    const std::vector<double> wrong{1.5, 1.2};
    CHECK_THROWS_AS((void)linearized_gap(gg, half, RenyiOrder(2.0), wrong), HypothesisError);
}

TEST_CASE("check_dct") {
    const auto g = grid(Gaussian{1.0});
    const std::vector<GridDensity> gg{g, g};
    const std::vector<double> orders{4.0 / 3.0, 4.0 / 3.0};
    const auto rep = check_dct(gg, 2.0, orders);
    CHECK(rep.pass);
    CHECK(std::abs(rep.gap) < 2e-4);
    CHECK(rep.rhs == doctest::Approx(-0.0849495183977).epsilon(1e-10));
    CHECK(rep.tol == doctest::Approx(1e-4));
    CHECK(to_string(rep.inequality_id) == "dct");

    const auto u = grid(Uniform{0.0, 1.0});
    const std::vector<GridDensity> uu{u, u};
    CHECK(check_dct(uu, 2.0, orders).gap == doctest::Approx(0.143841036226).epsilon(1e-4));

    const auto e = grid(Exponential{1.0}, 0.5);
    const std::vector<GridDensity> ee{e, e};
    const std::vector<double> low{2.0 / 3.0, 2.0 / 3.0};
    CHECK(check_dct(ee, 0.5, low).pass);

    const std::vector<double> bad{1.5, 2.0};
    CHECK_THROWS_AS((void)check_dct(gg, 2.0, bad), HypothesisError);
    CHECK(dct_gaussian_bound(2.0, orders) == doctest::Approx(-0.0849495183977).epsilon(1e-11));
}

TEST_CASE("check_repig") {
    const auto u = grid(Uniform{0.0, 1.0});
    const std::vector<GridDensity> uu{u, u};
    const auto a = check_repig(uu, 2.0, 27.0 / 32.0, 1.0, InequalityId::repic, "c_ram_sason");
    CHECK(a.pass);
    CHECK(a.lhs == doctest::Approx(2.25).epsilon(1e-6));
    CHECK(a.rhs == doctest::Approx(1.6875).epsilon(1e-9));

    const auto g = grid(Gaussian{1.0});
    const std::vector<GridDensity> gg{g, g};
    const auto b = check_repig(gg, 2.0, 27.0 / 32.0, 1.0);
    CHECK(b.pass);
    CHECK(b.lhs == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-6));
    CHECK(b.lhs / (b.rhs / b.constants.c) == doctest::Approx(1.0).epsilon(1e-6));

    const auto c = check_repig(uu, 2.0, 1.0, alpha_li(2.0), InequalityId::repialpha);
    CHECK(c.pass);
    CHECK(c.lhs == doctest::Approx(std::pow(2.25, alpha_li(2.0))).epsilon(1e-6));
    CHECK(c.rhs == doctest::Approx(2.0));

    const auto fail = check_repig(gg, 2.0, 1.5, 1.0);
    CHECK_FALSE(fail.pass);
    CHECK_THROWS_AS((void)check_repig(gg, 2.0, 0.0, 1.0), ParameterError);
}

TEST_CASE("linearization: multiplicative and additive forms agree") {
    const auto fams = testing::corpus();
    struct Case {
        double r, c, alpha;
    };
    const std::vector<Case> cases{{2.0, c_ram_sason(2.0, 2), 1.0},
                                  {2.0, 1.0, alpha_li(2.0)},
                                  {2.0, c_new_repi(2.0, 2, 0.5), 0.5},
                                  {2.0, 1.0, 1.0},
                                  {0.5, 1.2, 1.0}};
    for (std::size_t i = 0; i < fams.size(); ++i) {
        for (std::size_t j = i; j < fams.size(); ++j) {
            for (const auto& k : cases) {
                const std::vector<GridDensity> d{grid(fams[i], k.r), grid(fams[j], k.r)};
                const auto conv = linearization_converse(d, k.r, k.c, k.alpha);
                CAPTURE(to_string(fams[i]));
                CAPTURE(to_string(fams[j]));
                CAPTURE(k.c);
                CHECK(conv.log_gap == doctest::Approx(2.0 * k.alpha * (conv.linearized_lhs - conv.linearized_rhs)).epsilon(1e-6));
                if (std::abs(conv.log_gap) > 1e-3) CHECK(conv.multiplicative_pass == conv.linearized_pass);

                const auto fwd = linearization_forward(d, LambdaWeights({0.3, 0.7}), k.r, k.c, k.alpha);
                if (fwd.multiplicative_pass) CHECK(fwd.linearized_pass);
            }
        }
    }
}

TEST_CASE("pipelines cap the number of terms") {
    const auto g = grid(Gaussian{1.0});
    const std::vector<GridDensity> many(9, g);
    CHECK_THROWS_AS((void)plain_sum(many), ParameterError);
    const std::vector<GridDensity> three(3, g);
    CHECK(renyi_entropy(plain_sum(three), RenyiOrder(2.0)) ==
          doctest::Approx(gaussian_renyi_entropy(1, 3.0, RenyiOrder(2.0))).epsilon(1e-7));
}

TEST_CASE("inequality_tolerance") {
    CHECK(inequality_tolerance(0.01) == 1e-4);
    CHECK(inequality_tolerance(10.0) == doctest::Approx(1e-2));
    CHECK(inequality_tolerance(-10.0) == doctest::Approx(1e-2));
}
