#pragma once

#include <complex>
#include <vector>

namespace sdde {

/// Real polynomial with coefficients stored ascending by power
/// (coeffs[k] multiplies z^k). The zero polynomial is {} or {0}.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    /// Degree, with the convention deg(0) = -1.
    int degree() const;
    bool is_zero() const;
    bool is_monic(double tol = 0.0) const;

    const std::vector<double>& coeffs() const { return coeffs_; }
    double coeff(int k) const;
    double leading() const;

    std::complex<double> eval(std::complex<double> z) const;
    double eval(double x) const;

    Polynomial derivative() const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;

    /// All complex roots with multiplicity, as eigenvalues of the companion
    /// matrix of the monic normalization. Sorted descending by real part,
    /// ties broken by descending imaginary part. Throws for degree < 1.
    std::vector<std::complex<double>> roots() const;

private:
    std::vector<double> coeffs_;  // trailing zeros trimmed
};

/// Monic polynomial with the given roots. Non-real roots must appear in
/// conjugate pairs (pairing tolerance 1e-12); throws otherwise.
/// An empty list yields the constant 1.
Polynomial from_roots(const std::vector<std::complex<double>>& rs);

struct SddeReduction {
    double lambda0 = 0.0;  // unique constant making deg(R) < deg(Q)
    Polynomial remainder;  // R(z) = (z + lambda0) Q(z) - P(z)
};

/// For monic P, Q with deg(P) = deg(Q) + 1, computes the pair (lambda, R)
/// with R(z) = (z + lambda) Q(z) - P(z) and deg(R) < deg(Q). The leading
/// coefficients of (z + lambda) Q - P must cancel below 1e-10; they are
/// truncated after verification.
SddeReduction sdde_reduction(const Polynomial& P, const Polynomial& Q);

/// Groups roots closer than `tol` (absolute) into clusters and returns
/// (representative, multiplicity) pairs; the representative is the cluster
/// mean. Default tolerance matches the double-root decision rule used by
/// the CARMA(3,2) classifier.
std::vector<std::pair<std::complex<double>, int>>
cluster_roots(const std::vector<std::complex<double>>& rs, double tol = 1e-7);

}  // namespace sdde
