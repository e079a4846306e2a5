#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "sdde/characteristic.hpp"
#include "sdde/measure.hpp"

using namespace sdde;

namespace {

DelayMeasure single_delay(double lambda, double xi, double tau = 1.0) {
    return DelayMeasure(lambda, {{tau, xi}}, {});
}

}  // namespace

TEST_SUITE("characteristic") {

TEST_CASE("characteristic function evaluation") {
    DelayMeasure ou(1.0, {}, {});
    std::complex<double> z(0.3, 1.7);
    CHECK(std::abs(h_eval(ou, z) - (z + 1.0)) < 1e-14);
    CHECK(h_eval_real(single_delay(1.0, 0.2), 0.0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(h_eval_real(single_delay(1.0, -0.8), 0.0) == doctest::Approx(1.8).epsilon(1e-14));
    CHECK_THROWS(h_eval(ou, std::complex<double>(-0.1, 0.0)));
}

TEST_CASE("zero-free certificate on the right half-plane") {
    SUBCASE("pure mean reversion") {
        auto r = zero_free(DelayMeasure(1.0, {}, {}));
        CHECK(r.verdict);
        CHECK(r.winding == 0);
        CHECK(r.min_modulus_on_axis > 0.9);
        CHECK(r.contour_radius == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("small positive delay feedback") {
        auto r = zero_free(single_delay(1.0, 0.2));
        CHECK(r.verdict);
        CHECK(r.winding == 0);
    }
    SUBCASE("feedback overwhelming the mean reversion") {
        auto r = zero_free(single_delay(1.0, 1.5));
        CHECK_FALSE(r.verdict);
        CHECK(r.winding >= 1);
    }
    SUBCASE("failed mass condition implies a zero") {
        DelayMeasure phi = single_delay(1.0, 1.5);
        REQUIRE_FALSE(necessary_mass_check(phi));
        CHECK_FALSE(zero_free(phi).verdict);
    }
    SUBCASE("boundary zero at the origin is flagged") {
        CHECK_FALSE(zero_free(single_delay(1.0, 1.0)).verdict);
    }
}

TEST_CASE("agreement with the single-delay existence rule") {
    for (int k = -10; k <= 9; ++k) {
        double xi = 0.1 * k;
        bool expected = discrete_delay_existence(1.0, xi, 1.0);
        CHECK(zero_free(single_delay(1.0, xi)).verdict == expected);
    }
}

TEST_CASE("single-delay existence rule") {
    CHECK(discrete_delay_existence(1.0, 0.2, 1.0));
    CHECK(discrete_delay_existence(1.0, -0.8, 1.0));
    CHECK_FALSE(discrete_delay_existence(1.0, 1.0, 1.0));
    CHECK_THROWS(discrete_delay_existence(1.0, 1.5, 1.0));  // outside |xi| tau <= 1
}

TEST_CASE("complete monotonicity check") {
    SUBCASE("positive feedback passes through order six") {
        CMParams params;
        params.n_max = 6;
        params.xs.clear();
        for (int i = 0; i <= 100; ++i) params.xs.push_back(0.1 * i);
        auto r = complete_monotonicity_check(single_delay(1.0, 0.2), params);
        CHECK(r.completely_monotone);
        CHECK(r.n_checked == 6);
        CHECK_FALSE(r.failure.has_value());
    }
    SUBCASE("negative feedback fails at order two") {
        auto r = complete_monotonicity_check(single_delay(1.0, -0.8));
        CHECK_FALSE(r.completely_monotone);
        REQUIRE(r.failure.has_value());
        CHECK(r.failure->n == 2);
        CHECK(r.failure->x == 0.0);
        CHECK(r.failure->scaled_value == doctest::Approx(-1.36).epsilon(1e-9));
    }
    SUBCASE("pure mean reversion is completely monotone") {
        auto r = complete_monotonicity_check(DelayMeasure(1.0, {}, {}));
        CHECK(r.completely_monotone);
    }
    SUBCASE("order cap") {
        CMParams params;
        params.n_max = 13;
        CHECK_THROWS(complete_monotonicity_check(single_delay(1.0, 0.2), params));
    }
}

TEST_CASE("scaled second derivative matches the quadratic in the feedback weight") {
    for (int k = -9; k <= 9; ++k) {
        double xi = 0.1 * k;
        DelayMeasure phi = single_delay(1.0, xi);
        double h0 = h_eval_real(phi, 0.0);
        double scaled = std::pow(h0, 3) * inv_h_signed_deriv(phi, 0.0, 2);
        CHECK(scaled == doctest::Approx(xi * xi + 5.0 * xi + 2.0).epsilon(1e-9));
    }
}

TEST_CASE("first signed derivative has a closed form") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.1, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
        DelayMeasure phi(u(gen), {{u(gen), u(gen) - 0.75}}, {{u(gen) - 0.5, -u(gen), 1}});
        for (double x : {0.0, 0.4, 2.0}) {
            double h = h_eval_real(phi, x);
            double expected = (1.0 - laplace_deriv(phi, x, 1)) / (h * h);
            CHECK(inv_h_signed_deriv(phi, x, 1) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("signed derivatives match finite differences of the reciprocal") {
    DelayMeasure phi(1.0, {{0.8, 0.3}}, {{0.4, -1.2, 0}});
    auto inv_h = [&](double x) { return 1.0 / h_eval_real(phi, x); };
    double x = 0.7, h = 1e-3;
    double fd2 = (inv_h(x + h) - 2.0 * inv_h(x) + inv_h(x - h)) / (h * h);
    CHECK(inv_h_signed_deriv(phi, x, 2) == doctest::Approx(fd2).epsilon(1e-6));
    double fd3 = (inv_h(x + 2 * h) - 2.0 * inv_h(x + h) + 2.0 * inv_h(x - h) -
                  inv_h(x - 2 * h)) /
                 (2.0 * h * h * h);
    CHECK(-inv_h_signed_deriv(phi, x, 3) == doctest::Approx(fd3).epsilon(1e-4));
}

TEST_CASE("non-negative measures with existence are completely monotone") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    int tested = 0;
    for (int trial = 0; trial < 80 && tested < 50; ++trial) {
        DelayMeasure phi(0.5 + u(gen), {{u(gen), 0.5 * u(gen)}},
                         {{0.5 * u(gen), -1.0 - u(gen), static_cast<int>(gen() % 2)}});
        REQUIRE(is_nonneg_on_positive(phi).verdict == SignVerdict::Yes);
        if (!zero_free(phi).verdict) continue;
        ++tested;
        auto r = complete_monotonicity_check(phi);
        CHECK(r.completely_monotone);
    }
    CHECK(tested >= 50);
}

TEST_CASE("generic winding walker agrees on a shifted polynomial") {
    // z -> (z + 1)(z - 0.5) has exactly one zero in the right half-plane
    auto f = [](std::complex<double> z) { return (z + 1.0) * (z - 0.5); };
    auto inside = winding_zero_free(f, 3.0, {});
    CHECK_FALSE(inside.verdict);
    CHECK(inside.winding == 1);
    auto g = [](std::complex<double> z) { return (z + 1.0) * (z + 0.5); };
    CHECK(winding_zero_free(g, 3.0, {}).verdict);
}

}  // TEST_SUITE
