#include <doctest.h>

#include <cmath>
#include <random>

#include "sdde/kernel.hpp"
#include "sdde/measure.hpp"
#include "sdde/polynomial.hpp"

using namespace sdde;

namespace {

// Method-of-steps solution of g'(t) = -lambda g(t) + xi g(t - 1), g(0) = 1,
// g = 0 on (-inf, 0): sum over completed delay intervals.
double delay_series_kernel(double lambda, double xi, double t) {
    double sum = 0.0;
    double xi_pow = 1.0;
    double fact = 1.0;
    for (int k = 0; k <= static_cast<int>(t); ++k) {
        double s = t - k;
        sum += xi_pow * std::pow(s, k) * std::exp(-lambda * s) / fact;
        xi_pow *= xi;
        fact *= k + 1;
    }
    return sum;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("fourier inversion reproduces the pure mean-reversion kernel") {
    DelayMeasure ou(1.0, {}, {});
    auto grid = kernel_fft(ou, 40.0, 1 << 16);
    CHECK(grid.values.front() == doctest::Approx(1.0).epsilon(1e-3));
    double worst = 0.0;
    for (size_t i = 0; i < grid.values.size(); ++i) {
        double t = grid.time_at(i);
        if (t > 10.0) break;
        worst = std::max(worst, std::abs(grid.values[i] - std::exp(-t)));
    }
    CHECK(worst <= 1e-3);
    CHECK(grid.meta.method == "fft");
    CHECK(grid.meta.tail_error < 1e-6);
}

TEST_CASE("fourier inversion matches the delay series solution") {
    SUBCASE("positive feedback stays non-negative") {
        auto grid = kernel_fft(DelayMeasure(1.0, {{1.0, 0.2}}, {}), 40.0, 1 << 16);
        CHECK(min_scan(grid).value >= -1e-3);
        double worst = 0.0;
        for (size_t i = 0; i < grid.values.size(); ++i) {
            double t = grid.time_at(i);
            if (t > 10.0) break;
            worst = std::max(worst,
                             std::abs(grid.values[i] - delay_series_kernel(1.0, 0.2, t)));
        }
        CHECK(worst <= 2e-3);
    }
    SUBCASE("negative feedback dips visibly below zero") {
        auto grid = kernel_fft(DelayMeasure(1.0, {{1.0, -0.8}}, {}), 40.0, 1 << 16);
        auto scan = min_scan(grid);
        CHECK(scan.value < -0.01);
        CHECK(scan.t > 1.0);
        double worst = 0.0;
        for (size_t i = 0; i < grid.values.size(); ++i) {
            double t = grid.time_at(i);
            if (t > 10.0) break;
            worst = std::max(worst,
                             std::abs(grid.values[i] - delay_series_kernel(1.0, -0.8, t)));
        }
        CHECK(worst <= 2e-3);
    }
}

TEST_CASE("fourier inversion rejects models without a stationary solution") {
    CHECK_THROWS_WITH_AS(kernel_fft(DelayMeasure(1.0, {{1.0, 1.5}}, {}), 40.0, 1 << 12),
                         doctest::Contains("non-stationary"), std::runtime_error);
}

TEST_CASE("kernel value interpolation") {
    DelayMeasure ou(1.0, {}, {});
    auto grid = kernel_fft(ou, 40.0, 1 << 14);
    CHECK(kernel_value(grid, 0.5 * grid.dt) ==
          doctest::Approx(0.5 * (grid.values[0] + grid.values[1])).epsilon(1e-12));
    CHECK(kernel_value(grid, grid.horizon() + 1.0) == 0.0);
}

TEST_CASE("state-space kernel closed forms") {
    SUBCASE("first order") {
        auto grid = kernel_statespace(Polynomial({1.0, 1.0}), Polynomial({1.0}), 20.0, 0.01);
        for (size_t i = 0; i < grid.values.size(); i += 100)
            CHECK(grid.values[i] ==
                  doctest::Approx(std::exp(-grid.time_at(i))).epsilon(1e-10));
        CHECK(grid.meta.method == "statespace");
    }
    SUBCASE("partial fractions for order (2,1)") {
        auto grid =
            kernel_statespace(Polynomial({2.0, 3.0, 1.0}), Polynomial({1.5, 1.0}), 20.0, 0.01);
        for (size_t i = 0; i < grid.values.size(); i += 37) {
            double t = grid.time_at(i);
            double expect = 0.5 * std::exp(-t) + 0.5 * std::exp(-2.0 * t);
            CHECK(grid.values[i] == doctest::Approx(expect).epsilon(1e-8));
        }
    }
    SUBCASE("unit value at zero when the orders differ by one") {
        auto grid = kernel_statespace(Polynomial({16.0, 24.0, 9.0, 1.0}),
                                      Polynomial({5.0625, 4.5, 1.0}), 10.0, 0.01);
        CHECK(std::abs(grid.values.front() - 1.0) <= 1e-12);
    }
    SUBCASE("non-causal autoregressive polynomial is rejected") {
        CHECK_THROWS(kernel_statespace(Polynomial({-1.0, 0.0, 1.0}), Polynomial({1.0}), 10.0,
                                       0.01));
    }
}

TEST_CASE("fourier and state-space kernels agree on rational models") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> gap(0.3, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        int p = 1 + static_cast<int>(gen() % 3);
        std::vector<std::complex<double>> ar, ma;
        double pos = -0.4;
        for (int i = 0; i < p; ++i) {
            pos -= gap(gen);
            ar.emplace_back(pos, 0.0);
        }
        pos = -0.5;
        for (int i = 0; i < p - 1; ++i) {
            pos -= gap(gen);
            ma.emplace_back(pos, 0.0);
        }
        Polynomial P = from_roots(ar);
        Polynomial Q = from_roots(ma);
        auto red = sdde_reduction(P, Q);
        DelayMeasure phi(red.lambda0, {}, f_explicit(P, Q, ma));

        double horizon = 40.0;
        int n = 1 << 16;
        auto fft = kernel_fft(phi, horizon, n);
        auto ss = kernel_statespace(P, Q, horizon, fft.dt);
        double worst = 0.0;
        size_t len = std::min(fft.values.size(), ss.values.size());
        for (size_t i = 0; i < len; ++i)
            worst = std::max(worst, std::abs(fft.values[i] - ss.values[i]));
        CHECK(worst <= 2e-3);
    }
}

TEST_CASE("explicit density terms") {
    SUBCASE("single moving-average zero") {
        auto f = f_explicit(Polynomial({2.0, 3.0, 1.0}), Polynomial({1.5, 1.0}));
        REQUIRE(f.size() == 1);
        CHECK(f[0].coeff == doctest::Approx(0.25).epsilon(1e-10));
        CHECK(f[0].rate == doctest::Approx(-1.5).epsilon(1e-10));
        CHECK(f[0].power == 0);
    }
    SUBCASE("double moving-average zero with cached roots") {
        Polynomial P({16.0, 24.0, 9.0, 1.0});
        Polynomial Q({5.0625, 4.5, 1.0});
        auto f = f_explicit(P, Q, {{-2.25, 0.0}, {-2.25, 0.0}});
        REQUIRE(f.size() == 2);
        // (3.828125 t + 1.3125) exp(-2.25 t), order of terms unspecified
        double linear = 0.0, constant = 0.0;
        for (const auto& term : f) {
            CHECK(term.rate == doctest::Approx(-2.25).epsilon(1e-12));
            (term.power == 1 ? linear : constant) = term.coeff;
        }
        CHECK(linear == doctest::Approx(3.828125).epsilon(1e-12));
        CHECK(constant == doctest::Approx(1.3125).epsilon(1e-12));
    }
    SUBCASE("double zero recovered from eigenvalue clustering") {
        auto f = f_explicit(Polynomial({16.0, 24.0, 9.0, 1.0}),
                            Polynomial({5.0625, 4.5, 1.0}));
        REQUIRE(f.size() == 2);
        for (const auto& term : f) CHECK(term.rate == doctest::Approx(-2.25).epsilon(1e-6));
    }
    SUBCASE("two distinct zeros") {
        // (z+1)(z+2)(z+3) over (z+1.5)(z+2.5)
        auto f = f_explicit(Polynomial({6.0, 11.0, 6.0, 1.0}),
                            Polynomial({3.75, 4.0, 1.0}));
        REQUIRE(f.size() == 2);
        for (const auto& term : f) {
            CHECK(term.power == 0);
            CHECK(term.coeff == doctest::Approx(0.375).epsilon(1e-9));
        }
    }
    SUBCASE("laplace transform of the density matches the rational remainder") {
        Polynomial P({6.0, 11.0, 6.0, 1.0});
        Polynomial Q({3.75, 4.0, 1.0});
        auto red = sdde_reduction(P, Q);
        DelayMeasure eta(0.0, {}, f_explicit(P, Q));
        for (double x : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            double expect = red.remainder.eval(x) / Q.eval(x);
            CHECK(laplace_deriv(eta, x, 0) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
    SUBCASE("rejects configurations outside the closed forms") {
        // complex moving-average zeros
        CHECK_THROWS(f_explicit(Polynomial({6.0, 11.0, 6.0, 1.0}),
                                Polynomial({2.0, 1.0, 1.0})));
        // triple zero
        CHECK_THROWS(f_explicit(from_roots({{-1, 0}, {-2, 0}, {-3, 0}, {-4, 0}}),
                                from_roots({{-1.5, 0}, {-1.5, 0}, {-1.5, 0}})));
    }
}

TEST_CASE("grid minimum scan") {
    SUBCASE("monotone positive kernel") {
        auto grid = kernel_statespace(Polynomial({1.0, 1.0}), Polynomial({1.0}), 10.0, 0.01);
        auto scan = min_scan(grid);
        CHECK(scan.t == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(scan.value == doctest::Approx(std::exp(-10.0)).epsilon(1e-6));
    }
    SUBCASE("constant zero grid") {
        KernelGrid zero;
        zero.dt = 0.1;
        zero.values.assign(50, 0.0);
        auto scan = min_scan(zero);
        CHECK(scan.t == 0.0);
        CHECK(scan.value == 0.0);
    }
    SUBCASE("negative dip is located past the delay lag") {
        auto grid = kernel_fft(DelayMeasure(1.0, {{1.0, -0.8}}, {}), 40.0, 1 << 14);
        auto scan = min_scan(grid);
        CHECK(scan.value < -0.01);
        CHECK(scan.t > 1.0);
    }
}

TEST_CASE("renewal identity residual") {
    SUBCASE("pure mean reversion") {
        auto grid = kernel_fft(DelayMeasure(1.0, {}, {}), 40.0, 1 << 16);
        CHECK(renewal_residual(DelayMeasure(1.0, {}, {}), grid, 1.0, 2.0) <= 1e-6);
    }
    SUBCASE("discrete delay") {
        DelayMeasure phi(1.0, {{1.0, 0.2}}, {});
        auto grid = kernel_fft(phi, 40.0, 1 << 16);
        CHECK(renewal_residual(phi, grid, 0.5, 2.0) <= 1e-3);
    }
    SUBCASE("ten random split points per model") {
        std::mt19937_64 gen(31);
        std::uniform_real_distribution<double> u(0.05, 1.0);
        std::vector<DelayMeasure> models;
        models.emplace_back(1.0, std::vector<std::pair<double, double>>{},
                            std::vector<ExpPolyTerm>{});
        models.emplace_back(1.0, std::vector<std::pair<double, double>>{{1.0, 0.2}},
                            std::vector<ExpPolyTerm>{});
        models.emplace_back(1.0, std::vector<std::pair<double, double>>{{1.0, -0.8}},
                            std::vector<ExpPolyTerm>{});
        for (const auto& phi : models) {
            auto grid = kernel_fft(phi, 40.0, 1 << 16);
            for (int k = 0; k < 10; ++k) {
                double s = 0.2 + 3.0 * u(gen);
                double t = s + 0.2 + 4.0 * u(gen);
                CHECK(renewal_residual(phi, grid, s, t) <= 1e-3);
            }
        }
    }
    SUBCASE("degenerate split points are rejected") {
        auto grid = kernel_fft(DelayMeasure(1.0, {}, {}), 40.0, 1 << 12);
        CHECK_THROWS(renewal_residual(DelayMeasure(1.0, {}, {}), grid, 0.0, 2.0));
        CHECK_THROWS(renewal_residual(DelayMeasure(1.0, {}, {}), grid, 2.0, 1.0));
    }
}

}  // TEST_SUITE
