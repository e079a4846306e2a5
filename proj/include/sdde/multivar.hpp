#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "sdde/characteristic.hpp"
#include "sdde/kernel.hpp"
#include "sdde/measure.hpp"

namespace sdde {

/// d x d array of scalar delay measures; row j collects the measures
/// weighting each component's history in the j-th equation. The lag-zero
/// part aggregates into the matrix Lambda with Lambda(j,k) = entries[j][k]
/// lambda0, the positive-lag parts into the matrix measure Eta.
class MatrixDelayMeasure {
public:
    explicit MatrixDelayMeasure(std::vector<std::vector<DelayMeasure>> entries);

    size_t dim() const { return entries_.size(); }
    const DelayMeasure& entry(size_t j, size_t k) const { return entries_[j][k]; }
    Eigen::MatrixXd lambda() const;
    double max_entry_total_variation() const;

private:
    std::vector<std::vector<DelayMeasure>> entries_;
};

struct MMatrixReport {
    bool is_m = false;
    double alpha = 0.0;            // max diagonal entry, the canonical shift
    double spectral_radius = 0.0;  // of B = alpha I - A
    std::optional<std::pair<size_t, size_t>> witness;  // first positive off-diagonal
};

/// A is an M-matrix when A = alpha I - B for some alpha >= 0 and entrywise
/// non-negative B with spectral radius at most alpha. Off-diagonal entries
/// must be non-positive (tolerance 1e-12); taking alpha as the maximal
/// diagonal entry is then without loss of generality, since shifting B by a
/// multiple of I shifts its spectral radius by the same amount.
MMatrixReport is_m_matrix(const Eigen::MatrixXd& A);

/// Matrix characteristic function z I - integral of e^{-zt} against the
/// matrix measure; requires Re(z) >= 0.
Eigen::MatrixXcd matrix_h_eval(const MatrixDelayMeasure& phi, std::complex<double> z);

/// Winding check of det(matrix_h_eval) over the half-disk of radius
/// 2 (1 + d max entry total variation), where the determinant is dominated
/// by z^d and cannot vanish near the arc.
ZeroFreeReport det_zero_free(const MatrixDelayMeasure& phi, const ContourParams& params = {});

struct MsddeVerdict {
    bool nonneg = false;
    ZeroFreeReport zero_free;
    MMatrixReport m_matrix;
    bool entries_nonneg = false;
    std::optional<std::pair<size_t, size_t>> entry_witness;  // first failing eta entry
};

/// Sufficient certificate for an entrywise non-negative stationary solution:
/// det zero-free, every positive-lag entry a non-negative measure, and the
/// lag-zero matrix an M-matrix.
MsddeVerdict msdde_nonneg_check(const MatrixDelayMeasure& phi);

/// Uniform samples of the matrix kernel on [0, horizon].
struct MatrixKernelGrid {
    double dt = 0.0;
    std::vector<Eigen::MatrixXd> values;  // values[m] is the d x d kernel at m dt
    KernelMeta meta;

    size_t dim() const { return values.empty() ? 0 : static_cast<size_t>(values[0].rows()); }
    double time_at(size_t m) const { return dt * static_cast<double>(m); }
    KernelGrid entry_grid(size_t j, size_t k) const;
};

/// Matrix analogue of kernel_fft: per-frequency inversion of the matrix
/// characteristic function with the resolvent of a decaying reference matrix
/// subtracted and its matrix exponential added back on the time grid.
/// Throws on a right half-plane determinant zero or when any frequency
/// matrix has condition estimate above 1e12.
MatrixKernelGrid matrix_kernel_fft(const MatrixDelayMeasure& phi, double horizon, int n);

/// Entrywise min of exp(-A t) over the time grid stays above -1e-10. For
/// M-matrices this holds at every t; combined with eigenvalues of A in the
/// open right half-plane it is equivalent to A being one.
bool matexp_nonneg_check(const Eigen::MatrixXd& A, const std::vector<double>& t_grid);

}  // namespace sdde
