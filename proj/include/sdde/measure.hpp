#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace sdde {

/// One density term c * t^k * exp(r t) on (0, inf). Rates are required to be
/// strictly negative so every absolute moment of the density is finite.
struct ExpPolyTerm {
    double coeff = 0.0;
    double rate = -1.0;  // < 0
    int power = 0;       // >= 0
};

/// Signed delay measure phi = -lambda0 * delta_0 + eta, where eta consists of
/// finitely many atoms at strictly positive lags plus an exponential-polynomial
/// density. The positive-lag part eta is what the Laplace-transform calculus
/// below operates on.
class DelayMeasure {
public:
    DelayMeasure() = default;
    DelayMeasure(double lambda0,
                 std::vector<std::pair<double, double>> atoms,  // (location tau > 0, weight xi)
                 std::vector<ExpPolyTerm> density = {});

    double lambda0() const { return lambda0_; }
    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    const std::vector<ExpPolyTerm>& density() const { return density_; }

    /// phi([0, inf)) in closed form.
    double total_mass() const;

    /// |phi|([0, inf)) in closed form.
    double total_variation() const;

    /// Slowest density decay rate (the rate closest to zero), or fallback
    /// when there is no density. Used to choose scan/simulation horizons.
    double slowest_rate(double fallback = -1.0) const;

private:
    double lambda0_ = 0.0;
    std::vector<std::pair<double, double>> atoms_;
    std::vector<ExpPolyTerm> density_;
};

/// Necessary condition for the characteristic function to be zero-free on the
/// closed right half-plane: the total mass must be strictly negative.
bool necessary_mass_check(const DelayMeasure& phi);

enum class SignVerdict { Yes, No, Inconclusive };

struct NonNegReport {
    SignVerdict verdict = SignVerdict::Inconclusive;
    std::optional<double> witness;   // a t > 0 where the measure is negative
    bool numerically_verified = false;  // true when decided by grid scan rather than closed form
};

struct ScanParams {
    double t_scan = 0.0;  // 0 = auto: 20 / |slowest density rate|
    int n_points = 10000;
};

/// Decides whether phi restricted to (0, inf) is a non-negative measure:
/// all atom weights >= 0 and the density >= 0 on (0, inf). The density sign
/// is decided exactly for a single term, for two pure-exponential terms, and
/// for single-rate terms of joint degree <= 1; otherwise by a dense grid scan
/// with one bisection refinement around each sign change.
NonNegReport is_nonneg_on_positive(const DelayMeasure& phi, const ScanParams& scan = {});

/// n-th derivative of the Laplace transform of the positive-lag part eta,
/// evaluated at x >= 0, in closed form. n is capped at n_max (default 12).
double laplace_deriv(const DelayMeasure& phi, double x, int n, int n_max = 12);

/// Laplace transform of eta at complex z with Re(z) >= 0.
std::complex<double> laplace_eval(const DelayMeasure& phi, std::complex<double> z);

struct FirstMoment {
    double value = 0.0;
    bool violates_necessary_condition = false;  // set when value < -1
};

/// First moment of eta; values below -1 are incompatible with a non-negative
/// stationary solution and get flagged.
FirstMoment first_moment(const DelayMeasure& phi);

/// Density value of eta at t >= 0, extended to zero by continuity; atoms
/// are excluded.
double density_value(const DelayMeasure& phi, double t);

}  // namespace sdde
