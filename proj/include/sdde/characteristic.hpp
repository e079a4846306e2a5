#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "sdde/measure.hpp"

namespace sdde {

/// Characteristic function h(z) = z + lambda0 - L_eta(z) for Re(z) >= 0.
/// The model has a unique stationary solution exactly when h has no zero on
/// the closed right half-plane.
std::complex<double> h_eval(const DelayMeasure& phi, std::complex<double> z);

/// h restricted to the real axis x >= 0.
double h_eval_real(const DelayMeasure& phi, double x);

struct ZeroFreeReport {
    bool verdict = false;
    int winding = 0;
    double contour_radius = 0.0;
    double min_modulus_on_axis = 0.0;
};

struct ContourParams {
    double axis_tolerance = 1e-9;
    int max_points = 200000;
};

/// Argument-principle zero count of h over the half-disk {Re z >= 0, |z| <= R}
/// with R = 2 (1 + total variation of phi); every right half-plane zero has
/// modulus at most half of R. Phase steps are refined adaptively below pi/4.
/// If |h| dips to axis_tolerance on the imaginary axis the verdict is false
/// without a winding computation. Throws when the point budget is exhausted.
ZeroFreeReport zero_free(const DelayMeasure& phi, const ContourParams& params = {});

/// Same traversal for a caller-supplied function holomorphic on the closed
/// half-disk of the given radius; the radius must be large enough that no
/// zero sits near the arc.
ZeroFreeReport winding_zero_free(
    const std::function<std::complex<double>(std::complex<double>)>& f, double radius,
    const ContourParams& params = {});

struct CMFailure {
    double x = 0.0;
    int n = 0;
    double value = 0.0;         // (-1)^n (1/h)^(n)(x)
    double scaled_value = 0.0;  // h(x)^(n+1) times value, scale-free
};

struct CMReport {
    bool completely_monotone = false;
    int n_checked = 0;
    std::optional<CMFailure> failure;  // first failure in (x ascending, n ascending) order
};

struct CMParams {
    int n_max = 8;               // supported up to 12
    double cm_tolerance = 1e-10;  // on the scaled value
    std::vector<double> xs;       // empty = {0} plus geometric sweep over [1e-3, 1e2]
};

/// Checks (-1)^n (1/h)^(n)(x) >= 0 for n = 0..n_max over a grid of x >= 0.
/// Complete monotonicity of 1/h is equivalent to the stationary solution
/// being non-negative, so a failure here is a certificate of negativity.
CMReport complete_monotonicity_check(const DelayMeasure& phi, const CMParams& params = {});

/// (-1)^n d^n/dx^n (1/h)(x) in closed form, expanding the composition of
/// u -> 1/u with h through Bell-polynomial partition sums. n capped at 12.
double inv_h_signed_deriv(const DelayMeasure& phi, double x, int n);

/// Existence test for the single-delay model phi = -lambda delta_0 + xi
/// delta_tau. Requires |xi| tau <= 1; in that regime h is zero-free on the
/// closed right half-plane exactly when xi < lambda.
bool discrete_delay_existence(double lambda, double xi, double tau);

}  // namespace sdde
