#include "sdde/kernel.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "sdde/characteristic.hpp"

namespace sdde {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double kernel_value(const KernelGrid& grid, double t) {
    if (grid.values.empty()) throw std::invalid_argument("empty kernel grid");
    double u = (t - grid.t0) / grid.dt;
    if (u < 0.0) return u > -1e-9 ? grid.values.front() : 0.0;
    auto last = static_cast<double>(grid.values.size() - 1);
    if (u >= last) return u < last + 1e-9 ? grid.values.back() : 0.0;
    auto i = static_cast<size_t>(u);
    double w = u - static_cast<double>(i);
    return (1.0 - w) * grid.values[i] + w * grid.values[i + 1];
}

KernelGrid kernel_fft(const DelayMeasure& phi, double horizon, int n) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (n < 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("sample count must be a power of two, at least 16");
    if (!zero_free(phi).verdict)
        throw std::runtime_error(
            "non-stationary model: characteristic function has a right half-plane zero");

    const double dt = 2.0 * horizon / n;
    const double dy = 2.0 * kPi / (n * dt);
    const double y_max = 0.5 * n * dy;
    // Reference pole, matching the lag-zero atom when it decays.
    const double c = phi.lambda0() > 0.0 ? phi.lambda0() : 1.0;

    std::vector<std::complex<double>> rem(n), out(n);
    for (int k = 0; k < n; ++k) {
        std::complex<double> iy(0.0, -y_max + k * dy);
        rem[k] = 1.0 / h_eval(phi, iy) - 1.0 / (iy + c);
    }

    fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(rem.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    KernelGrid grid;
    grid.dt = dt;
    grid.values.resize(n / 2 + 1);
    for (int m = 0; m <= n / 2; ++m) {
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        grid.values[m] = std::exp(-c * (m * dt)) + sign * (dy / (2.0 * kPi)) * out[m].real();
    }
    grid.meta.method = "fft";
    grid.meta.freq_cutoff = y_max;
    grid.meta.tail_error = std::abs(rem.front()) * y_max / kPi;
    return grid;
}

KernelGrid kernel_statespace(const Polynomial& P, const Polynomial& Q, double horizon, double dt) {
    int p = P.degree();
    int q = Q.degree();
    if (p < 1) throw std::invalid_argument("autoregressive polynomial must have degree >= 1");
    if (!P.is_monic(1e-12)) throw std::invalid_argument("autoregressive polynomial must be monic");
    if (q >= p) throw std::invalid_argument("moving-average degree must be below autoregressive");
    if (!(dt > 0.0) || !(horizon >= 0.0)) throw std::invalid_argument("bad grid parameters");
    for (const auto& root : P.roots())
        if (root.real() >= 0.0) throw std::runtime_error("non-causal autoregressive polynomial");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i + 1 < p; ++i) A(i, i + 1) = 1.0;
    for (int j = 0; j < p; ++j) A(p - 1, j) = -P.coeff(j);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
    for (int k = 0; k <= q; ++k) b(k) = Q.coeff(k);

    Eigen::MatrixXd step = (A * dt).exp();
    Eigen::VectorXd state = Eigen::VectorXd::Unit(p, p - 1);

    KernelGrid grid;
    grid.dt = dt;
    auto count = static_cast<size_t>(std::floor(horizon / dt + 1e-9)) + 1;
    grid.values.reserve(count);
    for (size_t m = 0; m < count; ++m) {
        grid.values.push_back(b.dot(state));
        state = step * state;
    }
    grid.meta.method = "statespace";
    return grid;
}

MinScan min_scan(const KernelGrid& grid) {
    if (grid.values.empty()) throw std::invalid_argument("empty kernel grid");
    size_t best = 0;
    for (size_t i = 1; i < grid.values.size(); ++i)
        if (grid.values[i] < grid.values[best]) best = i;

    MinScan out{grid.time_at(best), grid.values[best]};
    if (best == 0 || best + 1 == grid.values.size()) return out;
    double ym = grid.values[best - 1], y0 = grid.values[best], yp = grid.values[best + 1];
    double curvature = ym - 2.0 * y0 + yp;
    if (curvature > 0.0) {
        double shift = 0.5 * (ym - yp) / curvature;
        shift = std::clamp(shift, -0.5, 0.5);
        out.t = grid.time_at(best) + shift * grid.dt;
        out.value = y0 - 0.25 * (ym - yp) * shift;
    }
    return out;
}

std::vector<ExpPolyTerm> f_explicit(const Polynomial& P, const Polynomial& Q) {
    if (Q.degree() == 0 && P.degree() == 1) return {};
    return f_explicit(P, Q, Q.roots());
}

std::vector<ExpPolyTerm> f_explicit(const Polynomial& P, const Polynomial& Q,
                                    const std::vector<std::complex<double>>& ma_roots) {
    int p = P.degree();
    int q = Q.degree();
    if (p != q + 1) throw std::invalid_argument("degree pair must be (p, p-1)");
    if (q == 0) return {};

    auto clusters = cluster_roots(ma_roots);
    std::vector<ExpPolyTerm> terms;
    for (const auto& [root, multiplicity] : clusters) {
        if (std::abs(root.imag()) > 1e-9) throw std::runtime_error("non-real moving-average zero");
        double beta = root.real();
        if (beta >= 0.0)
            throw std::runtime_error("moving-average zero not in the left half-plane");
        if (multiplicity == 1) {
            double qd = Q.derivative().eval(beta);
            terms.push_back({-P.eval(beta) / qd, beta, 0});
        } else if (multiplicity == 2 && q == 2) {
            terms.push_back({-P.derivative().eval(beta), beta, 0});
            terms.push_back({-P.eval(beta), beta, 1});
        } else {
            throw std::runtime_error("confluent case out of scope");
        }
    }
    return terms;
}

double renewal_residual(const DelayMeasure& phi, const KernelGrid& grid, double s, double t) {
    if (grid.values.size() < 3) throw std::invalid_argument("kernel grid too coarse");
    const double dt = grid.dt;
    auto snap = [&](double v) { return static_cast<long>(std::lround(v / dt)); };
    long is = snap(s), it = snap(t);
    if (is < 1 || it <= is || it >= static_cast<long>(grid.values.size()))
        throw std::invalid_argument("split points must satisfy 0 < s < t <= horizon");
    s = is * dt;
    t = it * dt;

    const auto& g = grid.values;
    // Convolution kernel of the restricted path segment: only the strictly
    // positive lags of phi reach past s, so the lag-zero atom never appears.
    auto segment_conv = [&](long iu) {
        double u = iu * dt;
        double k = 0.0;
        for (const auto& [tau, xi] : phi.atoms()) {
            double lag = u - tau;
            if (lag >= -1e-12 && lag <= s + 1e-12) k += xi * kernel_value(grid, lag);
        }
        if (!phi.density().empty()) {
            long lo = std::max<long>(iu - is, 0);
            double acc = 0.0;
            for (long iw = lo; iw <= iu; ++iw) {
                double w = iw * dt;
                double val = density_value(phi, w) * g[iu - iw];
                acc += (iw == lo || iw == iu) ? 0.5 * val : val;
            }
            k += acc * dt;
        }
        return k;
    };

    double integral = 0.0;
    for (long iu = is; iu <= it; ++iu) {
        double val = g[it - iu] * segment_conv(iu);
        integral += (iu == is || iu == it) ? 0.5 * val : val;
    }
    integral *= dt;

    return g[it] - (g[it - is] * g[is] + integral);
}

}  // namespace sdde
