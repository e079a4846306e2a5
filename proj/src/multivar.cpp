#include "sdde/multivar.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace sdde {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

MatrixDelayMeasure::MatrixDelayMeasure(std::vector<std::vector<DelayMeasure>> entries)
    : entries_(std::move(entries)) {
    size_t d = entries_.size();
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
    if (d > 16) throw std::invalid_argument("dimension capped at 16");
    for (const auto& row : entries_)
        if (row.size() != d) throw std::invalid_argument("entry array must be square");
}

Eigen::MatrixXd MatrixDelayMeasure::lambda() const {
    auto d = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k) out(j, k) = entries_[j][k].lambda0();
    return out;
}

double MatrixDelayMeasure::max_entry_total_variation() const {
    double tv = 0.0;
    for (const auto& row : entries_)
        for (const auto& e : row) tv = std::max(tv, e.total_variation());
    return tv;
}

MMatrixReport is_m_matrix(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("matrix must be square");
    MMatrixReport report;
    report.alpha = A.diagonal().maxCoeff();
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
        for (Eigen::Index k = 0; k < A.cols(); ++k) {
            if (j != k && A(j, k) > 1e-12) {
                report.witness = {static_cast<size_t>(j), static_cast<size_t>(k)};
                return report;
            }
        }
    }
    Eigen::MatrixXd B = report.alpha * Eigen::MatrixXd::Identity(A.rows(), A.cols()) - A;
    report.spectral_radius = B.eigenvalues().cwiseAbs().maxCoeff();
    report.is_m = report.alpha >= 0.0 && report.spectral_radius <= report.alpha + 1e-10;
    return report;
}

Eigen::MatrixXcd matrix_h_eval(const MatrixDelayMeasure& phi, std::complex<double> z) {
    if (z.real() < 0.0) throw std::invalid_argument("matrix_h_eval requires Re(z) >= 0");
    auto d = static_cast<Eigen::Index>(phi.dim());
    Eigen::MatrixXcd H(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            const auto& e = phi.entry(j, k);
            H(j, k) = e.lambda0() - laplace_eval(e, z);
            if (j == k) H(j, k) += z;
        }
    }
    return H;
}

ZeroFreeReport det_zero_free(const MatrixDelayMeasure& phi, const ContourParams& params) {
    double radius =
        2.0 * (1.0 + static_cast<double>(phi.dim()) * phi.max_entry_total_variation());
    return winding_zero_free(
        [&](std::complex<double> z) { return matrix_h_eval(phi, z).determinant(); }, radius,
        params);
}

MsddeVerdict msdde_nonneg_check(const MatrixDelayMeasure& phi) {
    MsddeVerdict verdict;
    verdict.entries_nonneg = true;
    for (size_t j = 0; j < phi.dim() && verdict.entries_nonneg; ++j) {
        for (size_t k = 0; k < phi.dim(); ++k) {
            if (is_nonneg_on_positive(phi.entry(j, k)).verdict != SignVerdict::Yes) {
                verdict.entries_nonneg = false;
                verdict.entry_witness = {j, k};
                break;
            }
        }
    }
    verdict.m_matrix = is_m_matrix(phi.lambda());
    verdict.zero_free = det_zero_free(phi);
    verdict.nonneg =
        verdict.zero_free.verdict && verdict.entries_nonneg && verdict.m_matrix.is_m;
    return verdict;
}

KernelGrid MatrixKernelGrid::entry_grid(size_t j, size_t k) const {
    KernelGrid grid;
    grid.dt = dt;
    grid.meta = meta;
    grid.values.reserve(values.size());
    for (const auto& m : values)
        grid.values.push_back(m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
    return grid;
}

MatrixKernelGrid matrix_kernel_fft(const MatrixDelayMeasure& phi, double horizon, int n) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (n < 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("sample count must be a power of two, at least 16");
    if (!det_zero_free(phi).verdict)
        throw std::runtime_error(
            "non-stationary model: matrix characteristic function is singular on the right "
            "half-plane");

    const auto d = static_cast<Eigen::Index>(phi.dim());
    const double dt = 2.0 * horizon / n;
    const double dy = 2.0 * kPi / (n * dt);
    const double y_max = 0.5 * n * dy;

    // Reference resolvent (iy I + C)^{-1}: C = Lambda when it decays, else I.
    Eigen::MatrixXd Lambda = phi.lambda();
    Eigen::MatrixXd C = Lambda;
    if (Lambda.eigenvalues().real().minCoeff() <= 0.0)
        C = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXcd Cc = C.cast<std::complex<double>>();
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);

    std::vector<Eigen::MatrixXcd> rem(n);
    for (int k = 0; k < n; ++k) {
        std::complex<double> iy(0.0, -y_max + k * dy);
        Eigen::MatrixXcd H = matrix_h_eval(phi, iy);
        Eigen::MatrixXcd Hinv = H.partialPivLu().inverse();
        double norm_h = H.cwiseAbs().rowwise().sum().maxCoeff();
        double norm_inv = Hinv.cwiseAbs().rowwise().sum().maxCoeff();
        if (norm_h * norm_inv > 1e12)
            throw std::runtime_error("near-singular frequency matrix");
        rem[k] = Hinv - (iy * I + Cc).partialPivLu().inverse();
    }

    MatrixKernelGrid grid;
    grid.dt = dt;
    grid.values.assign(n / 2 + 1, Eigen::MatrixXd::Zero(d, d));
    grid.meta.method = "fft";
    grid.meta.freq_cutoff = y_max;
    grid.meta.tail_error = rem.front().cwiseAbs().maxCoeff() * y_max / kPi;

    // Exponential of the reference, powered along the grid.
    Eigen::MatrixXd estep = (-C * dt).exp();
    Eigen::MatrixXd epow = Eigen::MatrixXd::Identity(d, d);
    for (int m = 0; m <= n / 2; ++m) {
        grid.values[m] = epow;
        epow = epow * estep;
    }

    std::vector<std::complex<double>> in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            for (int idx = 0; idx < n; ++idx) in[idx] = rem[idx](j, k);
            fftw_execute(plan);
            for (int m = 0; m <= n / 2; ++m) {
                double sign = (m % 2 == 0) ? 1.0 : -1.0;
                grid.values[m](j, k) += sign * (dy / (2.0 * kPi)) * out[m].real();
            }
        }
    }
    fftw_destroy_plan(plan);
    return grid;
}

bool matexp_nonneg_check(const Eigen::MatrixXd& A, const std::vector<double>& t_grid) {
    if (A.rows() != A.cols()) throw std::invalid_argument("matrix must be square");
    for (double t : t_grid) {
        if (t < 0.0) throw std::invalid_argument("time grid must be non-negative");
        Eigen::MatrixXd e = (-A * t).exp();
        if (e.minCoeff() < -1e-10) return false;
    }
    return true;
}

}  // namespace sdde
