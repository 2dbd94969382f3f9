#include <doctest.h>

#include <cmath>
#include <vector>

#include "renyi/densities.hpp"
#include "renyi/diagnostics.hpp"
#include "renyi/error.hpp"
#include "renyi/kernels.hpp"
#include "renyi/measures.hpp"
#include "support.hpp"

using namespace renyi;
using testing::grid;
using testing::normal_pdf;
using testing::sup_error;

TEST_CASE("make_analytic: gaussian is normalized and symmetric") {
    const auto f = make_analytic(Gaussian{1.0}, 8192, 1e-10);
    CHECK(f.size() == 8192);
    CHECK(std::abs(f.mass() - 1.0) < 1e-6);
    CHECK(f.x_min() == doctest::Approx(-f.x_max()));
    for (std::size_t i = 0; i < f.size() / 2; ++i) CHECK(f[i] == doctest::Approx(f[f.size() - 1 - i]).epsilon(1e-12));
}

TEST_CASE("make_analytic: uniform is constant 1 on [0,1]") {
    const auto f = make_analytic(Uniform{0.0, 1.0}, 8192, 1e-10);
    CHECK(f.x_min() == 0.0);
    CHECK(f.x_max() == 1.0);
    for (double v : f.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("make_analytic: exponential support follows the analytic quantile") {
    const auto f = make_analytic(Exponential{1.0}, 8192, 1e-10);
    CHECK(f.x_min() == 0.0);
    CHECK(f.x_max() == doctest::Approx(-std::log(1e-10)).epsilon(1e-12));
    CHECK(f.omitted_tail_mass() <= 1e-10 * (1 + 1e-9));
}

TEST_CASE("make_analytic: escort coverage widens the support for r < 1") {
    GridOptions o;
    o.min_order = 0.5;
    const auto wide = make_analytic(Gaussian{1.0}, o);
    const auto plain = make_analytic(Gaussian{1.0}, GridOptions{});
    CHECK(wide.x_max() == doctest::Approx(plain.x_max() * std::sqrt(2.0)));
}

TEST_CASE("make_analytic: invalid parameters") {
    CHECK_THROWS_AS((void)make_analytic(Gaussian{0.0}, 8192, 1e-10), ParameterError);
    CHECK_THROWS_AS((void)make_analytic(Uniform{1.0, 1.0}, 8192, 1e-10), ParameterError);
    CHECK_THROWS_AS((void)make_analytic(Exponential{-1.0}, 8192, 1e-10), ParameterError);
    CHECK_THROWS_AS((void)make_analytic(Laplace{0.0}, 8192, 1e-10), ParameterError);
    CHECK_THROWS_AS((void)make_analytic(StudentT{0.0}, 8192, 1e-10), ParameterError);
    CHECK_THROWS_AS((void)make_analytic(Gaussian{1.0}, 32, 1e-10), ParameterError);
    CHECK_THROWS_AS((void)make_analytic(Gaussian{1.0}, 8192, 1e-3), ParameterError);
}

TEST_CASE("student_t truncation warns") {
    const auto before = warning_count();
    set_warnings_enabled(false);
    const auto f = make_analytic(StudentT{1.0}, GridOptions{});
    set_warnings_enabled(true);
    CHECK(warning_count() > before);
    CHECK(f.omitted_tail_mass() > 1e-10);
    CHECK(std::abs(f.mass() - 1.0) < 1e-6);
}

TEST_CASE("parse_family") {
    CHECK(to_string(parse_family("gaussian:2")) == "gaussian:2");
    CHECK(to_string(parse_family("normal:0.5")) == "gaussian:0.5");
    CHECK(to_string(parse_family("uniform:0,1")) == "uniform:0,1");
    CHECK(to_string(parse_family("exponential:1")) == "exponential:1");
    CHECK(to_string(parse_family("laplace:1")) == "laplace:1");
    CHECK(to_string(parse_family("student_t:3")) == "student_t:3");
    CHECK_THROWS_AS((void)parse_family("cauchy:1"), ParseError);
    CHECK_THROWS_AS((void)parse_family("gaussian:x"), ParseError);
    CHECK_THROWS_AS((void)parse_family("uniform:0"), ParseError);
    CHECK_THROWS_AS((void)parse_family("gaussian:-1"), ParameterError);
}

TEST_CASE("normalize") {
    const auto f = grid(Gaussian{1.0});
    std::vector<double> doubled(f.values().begin(), f.values().end());
    for (double& v : doubled) v *= 2.0;
    const auto g = normalize(GridDensity(f.x_min(), f.x_max(), doubled));
    CHECK(sup_error(g, [&](double x) { return f(x); }) < 1e-12);

    const auto again = normalize(f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(again[i] == doctest::Approx(f[i]).epsilon(1e-12));
    CHECK(std::abs(again.mass() - 1.0) < 1e-12);

    CHECK_THROWS_AS((void)normalize(GridDensity(0.0, 1.0, std::vector<double>(64, 0.0))), DegenerateDensityError);
}

TEST_CASE("escort") {
    const auto g = grid(Gaussian{1.0});
    const auto g2 = escort(g, RenyiOrder(2.0));
    CHECK(sup_error(g2, [](double x) { return normal_pdf(x, 0.0, std::sqrt(0.5)); }) < 1e-8);

    const auto same = escort(g, RenyiOrder(1.0));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(same[i] == g[i]);

    const auto e2 = escort(grid(Exponential{1.0}), RenyiOrder(2.0));
    CHECK(sup_error(e2, [](double x) { return 2.0 * std::exp(-2.0 * x); }) < 1e-5);

    CHECK_THROWS_AS(RenyiOrder(0.0), OrderError);
    CHECK_THROWS_AS(RenyiOrder(-1.0), OrderError);
}

TEST_CASE("inverse_escort") {
    const auto s = grid(Gaussian{std::sqrt(0.5)}, 0.5);
    const auto back = inverse_escort(s, RenyiOrder(2.0));
    CHECK(sup_error(back, [](double x) { return normal_pdf(x, 0.0, 1.0); }) < 1e-8);

    const auto u = grid(Uniform{0.0, 1.0});
    for (double r : {0.5, 2.0, 3.0}) CHECK(sup_error(inverse_escort(u, RenyiOrder(r)), [](double) { return 1.0; }) < 1e-12);
}

TEST_CASE("inverse_escort undoes escort on the corpus") {
    for (const auto& fam : testing::corpus()) {
        for (double r : {0.5, 2.0, 3.0}) {
            const auto f = grid(fam, 0.5);
            const auto back = inverse_escort(escort(f, RenyiOrder(r)), RenyiOrder(r));
            CAPTURE(to_string(fam));
            CAPTURE(r);
            CHECK(sup_error(back, [&](double x) { return f(x); }) < 1e-9);
        }
    }
}

TEST_CASE("scale_rv") {
    const auto u = grid(Uniform{0.0, 1.0});
    const auto u2 = scale_rv(u, 2.0);
    CHECK(u2.x_min() == 0.0);
    CHECK(u2.x_max() == 2.0);
    for (double v : u2.values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));

    const auto same = scale_rv(u, 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(same[i] == u[i]);

    const auto g3 = scale_rv(grid(Gaussian{1.0}), 3.0);
    CHECK(sup_error(g3, [](double x) { return normal_pdf(x, 0.0, 3.0); }) < 1e-8);

    const auto e = grid(Exponential{1.0});
    const auto flipped = scale_rv(e, -1.0);
    CHECK(flipped.x_max() == doctest::Approx(0.0));
    CHECK(flipped(-1.0) == doctest::Approx(e(1.0)));

    CHECK_THROWS_AS((void)scale_rv(u, 0.0), ScaleError);
}

TEST_CASE("scaling shifts the entropy by log|a|") {
    for (const auto& fam : testing::corpus()) {
        const auto f = grid(fam);
        for (double a : {0.5, 3.0, -2.0}) {
            for (double r : {1.0, 2.0}) {
                const double dh = renyi_entropy(scale_rv(f, a), RenyiOrder(r)) - renyi_entropy(f, RenyiOrder(r));
                CHECK(dh == doctest::Approx(std::log(std::abs(a))).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("convolve: uniform pair gives the triangle") {
    const auto u = grid(Uniform{0.0, 1.0});
    const auto c = convolve_detailed(u, u);
    CHECK(c.drift < 1e-6);
    CHECK(c.density.x_min() == doctest::Approx(0.0));
    CHECK(c.density.x_max() == doctest::Approx(2.0));
    CHECK(sup_error(c.density, [](double x) { return std::max(0.0, 1.0 - std::abs(x - 1.0)); }) < 1e-3);

    // Direct quadrature on the same grid.
    std::vector<double> direct(2 * u.size() - 1);
    std::vector<double> w(u.values().begin(), u.values().end());
    w.front() *= 0.5;
    w.back() *= 0.5;
    kernels::serial::convolve_direct(w, u.values(), direct);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < direct.size(); ++i)
        worst = std::max(worst, std::abs(direct[i] * u.step() - c.density(u.step() * static_cast<double>(i))));
    CHECK(worst < 1e-3);
}

TEST_CASE("convolve: gaussians add variances") {
    const auto g = grid(Gaussian{1.0});
    const auto c = convolve(g, g);
    CHECK(sup_error(c, [](double x) { return normal_pdf(x, 0.0, std::sqrt(2.0)); }) < 1e-8);
}

TEST_CASE("convolve: a narrow gaussian is an approximate identity") {
    const auto f = grid(Laplace{1.0});
    const auto narrow = grid(Gaussian{0.02});
    const auto c = convolve(f, narrow);
    // Away from the kink the smoothing error is about f'' sigma^2 / 2.
    CHECK(sup_error(c, [&](double x) { return f(x); }, 0.5, 20.0) < 1e-3);
    CHECK(sup_error(c, [&](double x) { return f(x); }, -20.0, -0.5) < 1e-3);
}

TEST_CASE("convolve: mass drift and symmetry on corpus pairs") {
    const auto fams = testing::corpus();
    for (std::size_t i = 0; i < fams.size(); ++i) {
        for (std::size_t j = i; j < fams.size(); ++j) {
            const auto f = grid(fams[i]);
            const auto g = grid(fams[j]);
            const auto fg = convolve_detailed(f, g);
            const auto gf = convolve_detailed(g, f);
            CAPTURE(to_string(fams[i]));
            CAPTURE(to_string(fams[j]));
            CHECK(fg.drift < 1e-6);
            CHECK(fg.density.size() == gf.density.size());
            CHECK(sup_error(fg.density, [&](double x) { return gf.density(x); }) < 1e-10);
        }
    }
}

TEST_CASE("convolve rejects unnormalized input") {
    const auto g = grid(Gaussian{1.0});
    std::vector<double> v(g.values().begin(), g.values().end());
    for (double& x : v) x *= 3.0;
    CHECK_THROWS_AS((void)convolve(GridDensity(g.x_min(), g.x_max(), v), g), GridError);
}

TEST_CASE("on_common_grid") {
    const auto a = grid(Uniform{0.0, 1.0});
    const auto b = grid(Gaussian{1.0});
    const auto [x, y] = on_common_grid(a, b);
    CHECK(x.step() == doctest::Approx(y.step()));
    CHECK(x.x_min() == doctest::Approx(y.x_min()));
    CHECK(x.size() == y.size());
    CHECK(x.step() <= std::min(a.step(), b.step()) * (1 + 1e-12));
    CHECK(std::abs(x.mass() - 1.0) < 1e-6);
}

TEST_CASE("is_log_concave") {
    for (const auto& fam : testing::corpus()) {
        CAPTURE(to_string(fam));
        CHECK(is_log_concave(grid(fam)).log_concave);
    }
    set_warnings_enabled(false);
    const auto t = make_analytic(StudentT{1.0}, GridOptions{});
    set_warnings_enabled(true);
    const auto lc = is_log_concave(t);
    CHECK_FALSE(lc.log_concave);
    CHECK(lc.worst_violation > 0.0);
    CHECK(is_log_concave(grid(Uniform{0.0, 1.0})).degenerate == false);

    GridOptions fine;
    fine.grid_len = kFineGridLen;
    set_warnings_enabled(false);
    CHECK_FALSE(is_log_concave(make_analytic(StudentT{1.0}, fine)).log_concave);
    set_warnings_enabled(true);
    for (const auto& fam : testing::corpus()) CHECK(is_log_concave(make_analytic(fam, fine)).log_concave);
}

TEST_CASE("tail_sensitivity separates heavy tails") {
    CHECK(tail_sensitivity(grid(Uniform{0.0, 1.0}), 0.5) == 0.0);
    CHECK(tail_sensitivity(grid(Gaussian{1.0}, 0.5), 0.5) < 1e-8);
    set_warnings_enabled(false);
    GridOptions o;
    o.min_order = 0.5;
    const auto t = make_analytic(StudentT{1.0}, o);
    set_warnings_enabled(true);
    CHECK(tail_sensitivity(t, 0.5) > 1e-3);
}

TEST_CASE("translate keeps the shape") {
    const auto g = grid(Gaussian{1.0});
    const auto s = translate(g, 2.5);
    CHECK(s.x_min() == doctest::Approx(g.x_min() + 2.5));
    CHECK(renyi_entropy(s, RenyiOrder(2.0)) == doctest::Approx(renyi_entropy(g, RenyiOrder(2.0))).epsilon(1e-12));
}
