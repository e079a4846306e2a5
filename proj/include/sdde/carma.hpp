#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sdde/kernel.hpp"
#include "sdde/measure.hpp"
#include "sdde/polynomial.hpp"

namespace sdde {

/// Causal CARMA(p, q) model: monic autoregressive polynomial P of degree p
/// with all zeros in the open left half-plane, monic moving-average
/// polynomial Q of degree q < p. Zeros are cached; models built from roots
/// keep them exact instead of round-tripping through an eigensolver.
class CarmaModel {
public:
    static CarmaModel from_polynomials(Polynomial P, Polynomial Q);
    static CarmaModel from_roots(const std::vector<std::complex<double>>& ar_roots,
                                 const std::vector<std::complex<double>>& ma_roots);

    const Polynomial& ar() const { return ar_; }
    const Polynomial& ma() const { return ma_; }
    const std::vector<std::complex<double>>& ar_roots() const { return ar_roots_; }
    const std::vector<std::complex<double>>& ma_roots() const { return ma_roots_; }
    int p() const { return ar_.degree(); }
    int q() const { return ma_.degree(); }

    /// All moving-average zeros in the open left half-plane.
    bool is_invertible() const;

    /// Free-form provenance notes, e.g. set by compose().
    const std::string& notes() const { return notes_; }

private:
    CarmaModel(Polynomial P, Polynomial Q, std::vector<std::complex<double>> ar_roots,
               std::vector<std::complex<double>> ma_roots);

    Polynomial ar_, ma_;
    std::vector<std::complex<double>> ar_roots_, ma_roots_;
    std::string notes_;

    friend CarmaModel compose(const CarmaModel& m1, const Polynomial& P2);
};

struct OrderingReport {
    bool passes = false;
    std::vector<double> ar_sorted;  // descending, empty when any zero is complex
    std::vector<double> ma_sorted;
};

/// Ordering sufficient condition of Ball and Tsai: all zeros real and
/// negative, and after sorting both lists descending the autoregressive
/// partial sums dominate the moving-average ones for k = 1..q.
OrderingReport ball_tsai_check(const CarmaModel& m, double realness_tol = 1e-9);

struct SddeForm {
    double lambda0 = 0.0;
    std::vector<ExpPolyTerm> f;

    DelayMeasure measure() const { return DelayMeasure(lambda0, {}, f); }
};

/// Delay-equation form of an invertible CARMA(p, p-1) model: the measure
/// -lambda0 delta_0 + f(t) dt drives the same stationary process.
SddeForm sdde_form(const CarmaModel& m);

struct DensityCheck {
    bool applicable = false;  // false when f has no supported closed form
    NonNegReport report;
};

/// Sufficient condition via the delay density: the process is non-negative
/// whenever the remainder density f of sdde_form is non-negative.
DensityCheck remainder_density_check(const CarmaModel& m);

struct Carma32Report {
    bool nonneg_f = false;
    bool double_root = false;
    std::string reason;  // set when nonneg_f is false
};

/// Exact two-branch classifier of f >= 0 for p = 3, q = 2: with the
/// moving-average zeros sorted b1 >= b2, f is non-negative iff either
/// b1 > b2 and P(b1) <= min{P(b2), 0}, or b1 = b2 and max{P(b1), P'(b1)} <= 0.
/// Complex zeros make f oscillate and fail immediately. The tie b1 = b2 is
/// decided by the root-clustering threshold.
Carma32Report carma32_classifier(const CarmaModel& m);

/// Product model (P1 P2, Q1). The composed kernel is the convolution of the
/// factor kernels, so when m1 passes the density check and the pure
/// autoregressive factor P2 has a non-negative kernel the composition is
/// non-negative; that fact is recorded in the returned model's notes. A
/// degree-zero P2 returns m1 unchanged.
CarmaModel compose(const CarmaModel& m1, const Polynomial& P2);

struct Carma21Report {
    bool kernel_nonneg = false;   // exact: zeros real and gamma <= max zero
    bool density_nonneg = false;  // exact: zeros real and min <= gamma <= max
};

/// Exact verdicts for p = 2, q = 1 with moving-average zero gamma. The
/// density condition implies the kernel one; the gap between them is the
/// regime where the kernel is non-negative despite a sign-changing density.
Carma21Report carma21_verdict(const CarmaModel& m);

struct NonNegVerdict {
    std::optional<bool> ordering;    // absent when not evaluated
    std::optional<bool> density;     // absent unless q = p - 1 and f computable
    std::optional<bool> classifier;  // absent unless p = 3, q = 2
    bool kernel_scan = false;
    double kernel_min = 0.0;
    std::string notes;
};

/// Aggregates every applicable sufficient condition with a state-space
/// kernel scan as the numeric backstop. Scan tolerance -1e-6.
NonNegVerdict nonneg_verdict(const CarmaModel& m);

struct RegionRow {
    double beta = 0.0;
    bool ordering = false;
    bool classifier = false;
    bool density = false;
};

struct RegionScanSpec {
    std::vector<double> ar_roots;  // three real negative zeros
    double beta_min = -4.0;
    double beta_max = -0.01;
    double step = 0.01;
};

/// Sweeps the double moving-average zero beta of a CARMA(3, 2) family over a
/// uniform grid (both endpoints included, rows ascending in beta) and records
/// the three classifier verdicts per grid point.
std::vector<RegionRow> region_scan(const RegionScanSpec& spec);

}  // namespace sdde
