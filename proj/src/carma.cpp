#include "sdde/carma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdde {

namespace {

// Grid for numeric kernel scans: horizon covering 20 time constants of the
// slowest autoregressive mode.
void scan_grid(const std::vector<std::complex<double>>& ar_roots, double& horizon, double& dt) {
    double slowest = -1.0;
    for (const auto& r : ar_roots) slowest = std::max(slowest, r.real());
    horizon = 20.0 / std::abs(slowest);
    dt = horizon / 4000.0;
}

std::optional<std::vector<double>> real_sorted_desc(
    const std::vector<std::complex<double>>& roots, double realness_tol) {
    std::vector<double> out;
    out.reserve(roots.size());
    for (const auto& r : roots) {
        if (std::abs(r.imag()) > realness_tol) return std::nullopt;
        out.push_back(r.real());
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace

CarmaModel::CarmaModel(Polynomial P, Polynomial Q, std::vector<std::complex<double>> ar_roots,
                       std::vector<std::complex<double>> ma_roots)
    : ar_(std::move(P)), ma_(std::move(Q)), ar_roots_(std::move(ar_roots)),
      ma_roots_(std::move(ma_roots)) {
    if (ar_.degree() < 1) throw std::invalid_argument("autoregressive degree must be >= 1");
    if (!ar_.is_monic(1e-12) || !ma_.is_monic(1e-12))
        throw std::invalid_argument("polynomials must be monic");
    if (ma_.degree() >= ar_.degree())
        throw std::invalid_argument("moving-average degree must be below autoregressive");
    for (const auto& r : ar_roots_)
        if (r.real() >= 0.0)
            throw std::invalid_argument("autoregressive zeros must have negative real parts");
}

CarmaModel CarmaModel::from_polynomials(Polynomial P, Polynomial Q) {
    auto ar_roots = P.roots();
    auto ma_roots = Q.degree() >= 1 ? Q.roots() : std::vector<std::complex<double>>{};
    return CarmaModel(std::move(P), std::move(Q), std::move(ar_roots), std::move(ma_roots));
}

CarmaModel CarmaModel::from_roots(const std::vector<std::complex<double>>& ar_roots,
                                  const std::vector<std::complex<double>>& ma_roots) {
    return CarmaModel(sdde::from_roots(ar_roots), sdde::from_roots(ma_roots), ar_roots, ma_roots);
}

bool CarmaModel::is_invertible() const {
    for (const auto& r : ma_roots_)
        if (r.real() >= 0.0) return false;
    return true;
}

OrderingReport ball_tsai_check(const CarmaModel& m, double realness_tol) {
    OrderingReport report;
    auto ar = real_sorted_desc(m.ar_roots(), realness_tol);
    auto ma = real_sorted_desc(m.ma_roots(), realness_tol);
    if (!ar || !ma) return report;
    report.ar_sorted = *ar;
    report.ma_sorted = *ma;
    for (double r : report.ar_sorted)
        if (r >= 0.0) return report;
    for (double r : report.ma_sorted)
        if (r >= 0.0) return report;

    double ar_sum = 0.0, ma_sum = 0.0;
    for (size_t k = 0; k < report.ma_sorted.size(); ++k) {
        ar_sum += report.ar_sorted[k];
        ma_sum += report.ma_sorted[k];
        if (ar_sum < ma_sum) return report;
    }
    report.passes = true;
    return report;
}

SddeForm sdde_form(const CarmaModel& m) {
    if (m.p() != m.q() + 1)
        throw std::invalid_argument("delay-equation form requires q = p - 1");
    if (!m.is_invertible()) throw std::invalid_argument("model must be invertible");
    SddeForm form;
    form.lambda0 = sdde_reduction(m.ar(), m.ma()).lambda0;
    form.f = f_explicit(m.ar(), m.ma(), m.ma_roots());
    return form;
}

DensityCheck remainder_density_check(const CarmaModel& m) {
    DensityCheck check;
    if (m.p() != m.q() + 1 || !m.is_invertible()) return check;
    std::vector<ExpPolyTerm> f;
    try {
        f = f_explicit(m.ar(), m.ma(), m.ma_roots());
    } catch (const std::runtime_error&) {
        // Complex or deeply repeated moving-average zeros: no closed form.
        return check;
    }
    check.applicable = true;
    double lambda0 = sdde_reduction(m.ar(), m.ma()).lambda0;
    check.report = is_nonneg_on_positive(DelayMeasure(lambda0, {}, std::move(f)));
    return check;
}

Carma32Report carma32_classifier(const CarmaModel& m) {
    if (m.p() != 3 || m.q() != 2)
        throw std::invalid_argument("classifier requires p = 3, q = 2");
    if (!m.is_invertible()) throw std::invalid_argument("model must be invertible");
    Carma32Report report;
    for (const auto& r : m.ma_roots()) {
        if (std::abs(r.imag()) > 1e-9) {
            report.reason = "non-real moving-average zero";
            return report;
        }
    }
    auto clusters = cluster_roots(m.ma_roots());
    const Polynomial& P = m.ar();
    if (clusters.size() == 2) {
        double b1 = std::max(clusters[0].first.real(), clusters[1].first.real());
        double b2 = std::min(clusters[0].first.real(), clusters[1].first.real());
        double p1 = P.eval(b1), p2 = P.eval(b2);
        if (p1 <= std::min(p2, 0.0)) {
            report.nonneg_f = true;
        } else {
            report.reason = "P at the larger zero exceeds min{P at the smaller zero, 0}";
        }
    } else {
        report.double_root = true;
        double b = clusters[0].first.real();
        if (std::max(P.eval(b), P.derivative().eval(b)) <= 0.0) {
            report.nonneg_f = true;
        } else {
            report.reason = "max{P, P'} at the double zero is positive";
        }
    }
    return report;
}

CarmaModel compose(const CarmaModel& m1, const Polynomial& P2) {
    if (m1.p() != m1.q() + 1)
        throw std::invalid_argument("composition base must have q = p - 1");
    if (!m1.is_invertible()) throw std::invalid_argument("composition base must be invertible");
    if (P2.degree() == 0) return m1;
    if (!P2.is_monic(1e-12)) throw std::invalid_argument("composition factor must be monic");
    auto factor_roots = P2.roots();
    for (const auto& r : factor_roots)
        if (r.real() >= 0.0) throw std::invalid_argument("composition factor must be causal");

    auto ar_roots = m1.ar_roots();
    ar_roots.insert(ar_roots.end(), factor_roots.begin(), factor_roots.end());
    CarmaModel out(m1.ar() * P2, m1.ma(), std::move(ar_roots), m1.ma_roots());

    auto density = remainder_density_check(m1);
    if (density.applicable && density.report.verdict == SignVerdict::Yes) {
        double horizon = 0.0, dt = 0.0;
        scan_grid(factor_roots, horizon, dt);
        auto factor_kernel = kernel_statespace(P2, Polynomial({1.0}), horizon, dt);
        if (min_scan(factor_kernel).value >= -1e-9)
            out.notes_ = "non-negative by composition";
    }
    return out;
}

Carma21Report carma21_verdict(const CarmaModel& m) {
    if (m.p() != 2 || m.q() != 1)
        throw std::invalid_argument("verdict requires p = 2, q = 1");
    Carma21Report report;
    auto ar = real_sorted_desc(m.ar_roots(), 1e-9);
    if (!ar) return report;
    double gamma = m.ma_roots()[0].real();
    if (std::abs(m.ma_roots()[0].imag()) > 1e-9) return report;
    double hi = (*ar)[0], lo = (*ar)[1];
    report.kernel_nonneg = gamma <= hi;
    report.density_nonneg = lo <= gamma && gamma <= hi;
    return report;
}

NonNegVerdict nonneg_verdict(const CarmaModel& m) {
    NonNegVerdict verdict;
    verdict.notes = m.notes();

    verdict.ordering = ball_tsai_check(m).passes;
    auto density = remainder_density_check(m);
    if (density.applicable) {
        verdict.density = density.report.verdict == SignVerdict::Yes;
        if (density.report.numerically_verified) {
            if (!verdict.notes.empty()) verdict.notes += "; ";
            verdict.notes += "density sign decided numerically";
        }
    }
    if (m.p() == 3 && m.q() == 2 && m.is_invertible())
        verdict.classifier = carma32_classifier(m).nonneg_f;

    double horizon = 0.0, dt = 0.0;
    scan_grid(m.ar_roots(), horizon, dt);
    auto scan = min_scan(kernel_statespace(m.ar(), m.ma(), horizon, dt));
    verdict.kernel_min = scan.value;
    verdict.kernel_scan = scan.value >= -1e-6;
    return verdict;
}

std::vector<RegionRow> region_scan(const RegionScanSpec& spec) {
    if (spec.ar_roots.size() != 3)
        throw std::invalid_argument("scan requires three autoregressive zeros");
    if (!(spec.step > 0.0) || !(spec.beta_max >= spec.beta_min))
        throw std::invalid_argument("bad sweep range");
    std::vector<std::complex<double>> ar(spec.ar_roots.begin(), spec.ar_roots.end());

    auto count = static_cast<long>(std::lround((spec.beta_max - spec.beta_min) / spec.step));
    std::vector<RegionRow> rows;
    rows.reserve(count + 1);
    for (long k = 0; k <= count; ++k) {
        double beta = spec.beta_min + static_cast<double>(k) * spec.step;
        auto model = CarmaModel::from_roots(ar, {{beta, 0.0}, {beta, 0.0}});
        RegionRow row;
        row.beta = beta;
        row.ordering = ball_tsai_check(model).passes;
        row.classifier = carma32_classifier(model).nonneg_f;
        auto density = remainder_density_check(model);
        row.density = density.applicable && density.report.verdict == SignVerdict::Yes;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sdde
