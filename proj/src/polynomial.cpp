#include "sdde/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdde {

namespace {

void trim(std::vector<double>& c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    trim(coeffs_);
}

int Polynomial::degree() const {
    return static_cast<int>(coeffs_.size()) - 1;
}

bool Polynomial::is_zero() const {
    return coeffs_.empty();
}

bool Polynomial::is_monic(double tol) const {
    if (coeffs_.empty()) return false;
    return std::abs(coeffs_.back() - 1.0) <= tol;
}

double Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<size_t>(k)];
}

double Polynomial::leading() const {
    return coeffs_.empty() ? 0.0 : coeffs_.back();
}

std::complex<double> Polynomial::eval(std::complex<double> z) const {
    std::complex<double> acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double Polynomial::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) return Polynomial{};
    std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t i = 0; i < out.size(); ++i) out[i] = coeff(static_cast<int>(i)) + rhs.coeff(static_cast<int>(i));
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t i = 0; i < out.size(); ++i) out[i] = coeff(static_cast<int>(i)) - rhs.coeff(static_cast<int>(i));
    return Polynomial(std::move(out));
}

std::vector<std::complex<double>> Polynomial::roots() const {
    const int n = degree();
    if (n < 1) throw std::invalid_argument("roots: constant polynomial");

    // Companion matrix of the monic normalization, eigenvalues by QR iteration.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    const double lead = coeffs_.back();
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs_[static_cast<size_t>(i)] / lead;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("roots: eigenvalue iteration failed");

    std::vector<std::complex<double>> rs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rs[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    std::sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return rs;
}

Polynomial from_roots(const std::vector<std::complex<double>>& rs) {
    constexpr double kPairTol = 1e-12;

    std::vector<std::complex<double>> pending(rs);
    std::vector<std::complex<double>> acc{1.0};

    auto mul_linear = [&acc](std::complex<double> root) {
        // acc *= (z - root)
        std::vector<std::complex<double>> out(acc.size() + 1, 0.0);
        for (size_t i = 0; i < acc.size(); ++i) {
            out[i + 1] += acc[i];
            out[i] -= acc[i] * root;
        }
        acc = std::move(out);
    };

    while (!pending.empty()) {
        std::complex<double> r = pending.back();
        pending.pop_back();
        if (std::abs(r.imag()) <= kPairTol) {
            mul_linear(std::complex<double>(r.real(), 0.0));
            continue;
        }
        auto mate = std::find_if(pending.begin(), pending.end(), [&](const auto& c) {
            return std::abs(c - std::conj(r)) <= kPairTol * (1.0 + std::abs(r));
        });
        if (mate == pending.end())
            throw std::invalid_argument("from_roots: unpaired complex root");
        pending.erase(mate);
        mul_linear(r);
        mul_linear(std::conj(r));
    }

    std::vector<double> out(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].real();
    out.back() = 1.0;
    return Polynomial(std::move(out));
}

SddeReduction sdde_reduction(const Polynomial& P, const Polynomial& Q) {
    constexpr double kCancelTol = 1e-10;

    if (!P.is_monic() || !Q.is_monic())
        throw std::invalid_argument("sdde_reduction: P and Q must be monic");
    const int p = P.degree();
    const int q = Q.degree();
    if (p != q + 1)
        throw std::invalid_argument("sdde_reduction: deg(P) must equal deg(Q) + 1");

    // lambda cancels the z^q coefficient of (z + lambda) Q - P.
    const double a1 = P.coeff(p - 1);
    const double bq1 = (q >= 1) ? Q.coeff(q - 1) : 0.0;
    const double lambda0 = a1 - bq1;

    Polynomial shifted = Polynomial({lambda0, 1.0}) * Q;
    Polynomial R = shifted - P;
    for (int k = R.degree(); k >= q; --k) {
        if (std::abs(R.coeff(k)) >= kCancelTol)
            throw std::runtime_error("sdde_reduction: leading coefficients failed to cancel");
    }
    std::vector<double> truncated(R.coeffs().begin(),
                                  R.coeffs().begin() + std::min<size_t>(R.coeffs().size(),
                                                                        static_cast<size_t>(std::max(q, 0))));
    return SddeReduction{lambda0, Polynomial(std::move(truncated))};
}

std::vector<std::pair<std::complex<double>, int>>
cluster_roots(const std::vector<std::complex<double>>& rs, double tol) {
    std::vector<std::pair<std::complex<double>, int>> clusters;
    std::vector<bool> used(rs.size(), false);
    for (size_t i = 0; i < rs.size(); ++i) {
        if (used[i]) continue;
        std::complex<double> sum = rs[i];
        int count = 1;
        used[i] = true;
        for (size_t j = i + 1; j < rs.size(); ++j) {
            if (!used[j] && std::abs(rs[j] - rs[i]) < tol) {
                sum += rs[j];
                ++count;
                used[j] = true;
            }
        }
        clusters.emplace_back(sum / static_cast<double>(count), count);
    }
    return clusters;
}

}  // namespace sdde
