#include "sdde/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sdde {

std::complex<double> h_eval(const DelayMeasure& phi, std::complex<double> z) {
    if (z.real() < 0.0) throw std::invalid_argument("h_eval requires Re(z) >= 0");
    return z + phi.lambda0() - laplace_eval(phi, z);
}

double h_eval_real(const DelayMeasure& phi, double x) {
    return h_eval(phi, std::complex<double>(x, 0.0)).real();
}

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMaxPhaseStep = kPi / 4.0;
constexpr int kMaxDepth = 60;

struct TraversalState {
    int points_used = 0;
    int max_points = 0;
    double total_arg = 0.0;
    double min_modulus_axis = std::numeric_limits<double>::infinity();
    bool axis_near_zero = false;
};

// Walks one contour piece z(s), s in [0, 1], accumulating the phase change of
// f along it. Segments are split until the phase step is below pi/4; a split
// that bottoms out at kMaxDepth means f vanishes on (or numerically on) the
// piece, which is only possible on the axis piece and is flagged there.
void walk_piece(const std::function<std::complex<double>(std::complex<double>)>& f,
                const std::function<std::complex<double>(double)>& z_of,
                bool is_axis, double axis_tolerance, TraversalState& state) {
    struct Seg {
        double s0, s1;
        std::complex<double> h0, h1;
        int depth;
    };
    auto eval = [&](double s) {
        if (++state.points_used > state.max_points)
            throw std::runtime_error("contour resolution exhausted");
        std::complex<double> h = f(z_of(s));
        if (is_axis) {
            double m = std::abs(h);
            state.min_modulus_axis = std::min(state.min_modulus_axis, m);
            if (m <= axis_tolerance) state.axis_near_zero = true;
        }
        return h;
    };

    // The endpoint phase test cannot see a swing within pi/4 of a full turn,
    // so the piece is pre-split until no segment can hide one; 16 segments
    // cover phase variation up to 16 (2 pi - pi/4), far beyond det growth z^d
    // at any usable dimension.
    constexpr int kInitialSegments = 16;
    std::vector<std::complex<double>> h_init(kInitialSegments + 1);
    for (int i = 0; i <= kInitialSegments; ++i)
        h_init[i] = eval(static_cast<double>(i) / kInitialSegments);
    std::vector<Seg> stack;
    for (int i = kInitialSegments; i > 0; --i)
        stack.push_back({static_cast<double>(i - 1) / kInitialSegments,
                         static_cast<double>(i) / kInitialSegments, h_init[i - 1], h_init[i], 0});
    while (!stack.empty()) {
        if (state.axis_near_zero) return;
        Seg seg = stack.back();
        stack.pop_back();
        double step = std::arg(seg.h1 / seg.h0);
        if (std::abs(step) < kMaxPhaseStep || seg.depth >= kMaxDepth) {
            if (seg.depth >= kMaxDepth && is_axis) {
                // Unresolvable phase jump: a zero sits between the endpoints.
                state.min_modulus_axis =
                    std::min({state.min_modulus_axis, std::abs(seg.h0), std::abs(seg.h1)});
                state.axis_near_zero = true;
                return;
            }
            state.total_arg += step;
            continue;
        }
        double sm = 0.5 * (seg.s0 + seg.s1);
        std::complex<double> hm = eval(sm);
        // Process in traversal order so total_arg stays a path integral.
        stack.push_back({sm, seg.s1, hm, seg.h1, seg.depth + 1});
        stack.push_back({seg.s0, sm, seg.h0, hm, seg.depth + 1});
    }
}

}  // namespace

ZeroFreeReport winding_zero_free(
    const std::function<std::complex<double>(std::complex<double>)>& f, double radius,
    const ContourParams& params) {
    ZeroFreeReport report;
    report.contour_radius = radius;

    TraversalState state;
    state.max_points = params.max_points;

    // Axis piece first, from +iR down to -iR, so a zero on the boundary of
    // the half-plane is detected before any winding arithmetic.
    walk_piece(
        f, [&](double s) { return std::complex<double>(0.0, radius * (1.0 - 2.0 * s)); },
        true, params.axis_tolerance, state);
    report.min_modulus_on_axis = state.min_modulus_axis;
    if (state.axis_near_zero) {
        report.verdict = false;
        return report;
    }

    // Closing arc from -iR through +R to +iR.
    walk_piece(
        f,
        [&](double s) {
            double theta = -kPi / 2.0 + kPi * s;
            return std::complex<double>(radius * std::cos(theta), radius * std::sin(theta));
        },
        false, params.axis_tolerance, state);

    report.winding = static_cast<int>(std::lround(state.total_arg / (2.0 * kPi)));
    report.verdict = report.winding == 0 && report.min_modulus_on_axis > params.axis_tolerance;
    return report;
}

ZeroFreeReport zero_free(const DelayMeasure& phi, const ContourParams& params) {
    return winding_zero_free([&](std::complex<double> z) { return h_eval(phi, z); },
                             2.0 * (1.0 + phi.total_variation()), params);
}

namespace {

double factorial(int n) {
    double out = 1.0;
    for (int k = 2; k <= n; ++k) out *= k;
    return out;
}

// One monomial of the composition expansion: multiplicity counts alpha_j of
// parts j, with sum j * alpha_j = n, plus its combinatorial multiplier
// n! |alpha|! / prod_j (alpha_j! (j!)^alpha_j).
struct PartitionTerm {
    std::vector<std::pair<int, int>> parts;  // (j, alpha_j), alpha_j >= 1
    int order = 0;                           // |alpha|
    double multiplier = 0.0;
};

void enumerate_partitions(int remaining, int max_part, std::vector<std::pair<int, int>>& current,
                          std::vector<PartitionTerm>& out, int n) {
    if (remaining == 0) {
        PartitionTerm term;
        term.parts = current;
        double denom = 1.0;
        for (const auto& [j, aj] : current) {
            term.order += aj;
            denom *= factorial(aj) * std::pow(factorial(j), aj);
        }
        term.multiplier = factorial(n) * factorial(term.order) / denom;
        out.push_back(std::move(term));
        return;
    }
    for (int j = std::min(max_part, remaining); j >= 1; --j) {
        int max_count = remaining / j;
        for (int aj = max_count; aj >= 1; --aj) {
            current.emplace_back(j, aj);
            enumerate_partitions(remaining - j * aj, j - 1, current, out, n);
            current.pop_back();
        }
    }
}

std::vector<PartitionTerm> partitions_of(int n) {
    std::vector<PartitionTerm> out;
    std::vector<std::pair<int, int>> current;
    enumerate_partitions(n, n, current, out, n);
    return out;
}

// Shared worker returning both the raw signed derivative and the h^(n+1)
// scaled variant, reusing Laplace derivatives across partition terms.
void signed_derivs(const DelayMeasure& phi, double x, int n, double& value, double& scaled) {
    double h = h_eval_real(phi, x);
    if (n == 0) {
        value = 1.0 / h;
        scaled = 1.0;
        return;
    }
    std::vector<double> factor(n + 1, 0.0);  // factor[j] = (-1)^(j+1) h^(j)(x)
    factor[1] = 1.0 - laplace_deriv(phi, x, 1);
    for (int j = 2; j <= n; ++j) {
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        factor[j] = sign * laplace_deriv(phi, x, j);
    }
    // scaled = h^(n+1) (-1)^n (1/h)^(n); each partition contributes its
    // multiplier times prod factor[j]^alpha_j times h^(n - |alpha|).
    scaled = 0.0;
    for (const auto& term : partitions_of(n)) {
        double prod = term.multiplier;
        for (const auto& [j, aj] : term.parts)
            for (int k = 0; k < aj; ++k) prod *= factor[j];
        scaled += prod * std::pow(h, n - term.order);
    }
    value = scaled / std::pow(h, n + 1);
}

}  // namespace

double inv_h_signed_deriv(const DelayMeasure& phi, double x, int n) {
    if (n < 0 || n > 12) throw std::invalid_argument("derivative order must be in [0, 12]");
    double value = 0.0, scaled = 0.0;
    signed_derivs(phi, x, n, value, scaled);
    return value;
}

CMReport complete_monotonicity_check(const DelayMeasure& phi, const CMParams& params) {
    if (params.n_max < 0 || params.n_max > 12)
        throw std::invalid_argument("derivative order must be in [0, 12]");
    std::vector<double> xs = params.xs;
    if (xs.empty()) {
        xs.push_back(0.0);
        const int count = 26;
        for (int k = 0; k < count; ++k)
            xs.push_back(1e-3 * std::pow(1e5, static_cast<double>(k) / (count - 1)));
    }
    std::sort(xs.begin(), xs.end());

    CMReport report;
    report.n_checked = params.n_max;
    for (double x : xs) {
        if (x < 0.0) throw std::invalid_argument("monotonicity grid requires x >= 0");
        double h = h_eval_real(phi, x);
        if (!(h > 0.0)) {
            double v = h < 0.0 ? 1.0 / h : -std::numeric_limits<double>::infinity();
            report.completely_monotone = false;
            report.failure = CMFailure{x, 0, v, v};
            return report;
        }
        for (int n = 1; n <= params.n_max; ++n) {
            double value = 0.0, scaled = 0.0;
            signed_derivs(phi, x, n, value, scaled);
            if (scaled < -params.cm_tolerance) {
                report.completely_monotone = false;
                report.failure = CMFailure{x, n, value, scaled};
                return report;
            }
        }
    }
    report.completely_monotone = true;
    return report;
}

bool discrete_delay_existence(double lambda, double xi, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("delay must be positive");
    if (std::abs(xi) * tau > 1.0)
        throw std::invalid_argument("existence test requires |xi| tau <= 1");
    return xi < lambda;
}

}  // namespace sdde
