#pragma once

#include <string>
#include <vector>

#include "sdde/measure.hpp"
#include "sdde/polynomial.hpp"

namespace sdde {

struct KernelMeta {
    std::string method;
    double freq_cutoff = 0.0;   // highest frequency used by the inversion
    double tail_error = 0.0;    // estimate of the truncated spectral tail
};

/// Uniform samples of the stationary kernel g on [0, horizon], g[i] at t0 + i dt.
struct KernelGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;
    KernelMeta meta;

    double time_at(size_t i) const { return t0 + dt * static_cast<double>(i); }
    double horizon() const { return values.empty() ? t0 : time_at(values.size() - 1); }
};

/// Linear interpolation on the grid; zero outside [t0, horizon].
double kernel_value(const KernelGrid& grid, double t);

/// Inverts 1 / h(i y) into g by discrete Fourier transform. The pole-matched
/// reference exp(-lambda0 t) is subtracted in frequency so the remaining
/// spectrum decays like y^-2, then added back on the time grid. n must be an
/// even power of two sized sample count; the time grid uses dt = 2 horizon / n
/// and the first n/2 + 1 samples are returned, leaving half the period as
/// padding against wrap-around. Throws when h has a right half-plane zero.
KernelGrid kernel_fft(const DelayMeasure& phi, double horizon, int n);

/// Kernel of a causal state-space model: g(t) = b^T exp(A t) e_p with A the
/// companion matrix of the monic polynomial P (degree p) and b holding the
/// coefficients of Q (degree q < p). Matrix exponential of one step, powered
/// along the grid. Throws when P has a root with non-negative real part.
KernelGrid kernel_statespace(const Polynomial& P, const Polynomial& Q, double horizon, double dt);

struct MinScan {
    double t = 0.0;
    double value = 0.0;
};

/// Grid argmin with one parabolic refinement through the neighbouring samples.
MinScan min_scan(const KernelGrid& grid);

/// Density terms of the moving-average remainder for a degree (p, p-1) pair:
/// the function f with Laplace transform ((z + lambda) Q(z) - P(z)) / Q(z).
/// Distinct real roots beta_j of Q give -P(beta_j)/Q'(beta_j) exp(beta_j t);
/// a double root (only supported at q = 2) gives -(P(beta) t + P'(beta))
/// exp(beta t). Complex or repeated higher-order roots are rejected.
std::vector<ExpPolyTerm> f_explicit(const Polynomial& P, const Polynomial& Q);

/// Same construction with the moving-average zeros supplied by the caller,
/// bypassing the eigensolver when exact zeros are already known.
std::vector<ExpPolyTerm> f_explicit(const Polynomial& P, const Polynomial& Q,
                                    const std::vector<std::complex<double>>& ma_roots);

/// Defect of the flow identity
///   g(t) = g(t - s) g(s) + int_s^t g(t - u) (phi * (g 1_[0,s]))(u) du
/// evaluated by trapezoidal quadrature on the grid, with s and t snapped to
/// grid points. The atom at lag zero never contributes on (s, t].
double renewal_residual(const DelayMeasure& phi, const KernelGrid& grid, double s, double t);

}  // namespace sdde
