#include "sdde/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdde/characteristic.hpp"

namespace sdde {

PathSample simulate_ma(const KernelGrid& g, const SubordinatorSpec& s, double T, uint64_t seed) {
    if (g.values.empty()) throw std::invalid_argument("empty kernel grid");
    if (!(T > 0.0)) throw std::invalid_argument("path length must be positive");
    const double dt = g.dt;
    const size_t K = g.values.size();
    const auto N = static_cast<size_t>(std::lround(T / dt));

    PathSample path;
    path.meta = {"ma", seed, dt, static_cast<double>(K) * dt,
                 std::abs(g.values.back()) > 1e-4};

    // inc[j] covers ((j - K) dt, (j - K + 1) dt]; one stream, drawn in time order.
    std::vector<double> inc = sample_increments(s, dt, N + K, seed);
    path.t.reserve(N + 1);
    path.x.reserve(N + 1);
    for (size_t i = 0; i <= N; ++i) {
        double x = 0.0;
        // X_i = sum_m g[m] inc_{i-1-m}; inc_j lives at inc[j + K].
        for (size_t m = 0; m < K; ++m) x += g.values[m] * inc[K + i - 1 - m];
        path.t.push_back(dt * static_cast<double>(i));
        path.x.push_back(x);
    }
    return path;
}

PathSample simulate_euler(const DelayMeasure& phi, const SubordinatorSpec& s, double T, double dt,
                          uint64_t seed, double burn_in) {
    if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("bad grid parameters");
    for (const auto& [tau, xi] : phi.atoms()) {
        (void)xi;
        if (dt > tau) throw std::invalid_argument("step exceeds the smallest delay");
    }
    if (!zero_free(phi).verdict)
        throw std::runtime_error(
            "non-stationary model: characteristic function has a right half-plane zero");

    double rate_scale = std::abs(phi.slowest_rate(-phi.lambda0()));
    if (!(rate_scale > 0.0)) rate_scale = 1.0;
    if (burn_in < 0.0) burn_in = 20.0 / rate_scale;

    const auto B = static_cast<size_t>(std::lround(burn_in / dt));
    const auto N = static_cast<size_t>(std::lround(T / dt));
    const size_t total = B + N;

    std::vector<size_t> atom_lag;
    for (const auto& [tau, xi] : phi.atoms()) {
        (void)xi;
        atom_lag.push_back(static_cast<size_t>(std::lround(tau / dt)));
    }
    // Density history window: 20 time constants of the slowest density mode.
    size_t density_window = 0;
    if (!phi.density().empty())
        density_window =
            static_cast<size_t>(std::ceil(20.0 / (std::abs(phi.slowest_rate()) * dt)));
    std::vector<double> density_samples(density_window + 1, 0.0);
    for (size_t i = 0; i <= density_window; ++i)
        density_samples[i] = density_value(phi, static_cast<double>(i) * dt);

    std::vector<double> inc = sample_increments(s, dt, total, seed);

    // Zero prefix stands in for the history on [-max lag, -burn_in].
    size_t max_lag = density_window;
    for (size_t lag : atom_lag) max_lag = std::max(max_lag, lag);
    std::vector<double> x(max_lag + total + 1, 0.0);
    const size_t base = max_lag;  // x[base + k] is the state at -burn_in + k dt

    for (size_t k = 0; k < total; ++k) {
        double drift = -phi.lambda0() * x[base + k];
        for (size_t j = 0; j < atom_lag.size(); ++j)
            drift += phi.atoms()[j].second * x[base + k - atom_lag[j]];
        if (density_window > 0) {
            double conv = 0.0;
            for (size_t i = 0; i <= density_window; ++i) {
                double term = density_samples[i] * x[base + k - i];
                conv += (i == 0 || i == density_window) ? 0.5 * term : term;
            }
            drift += conv * dt;
        }
        x[base + k + 1] = x[base + k] + dt * drift + inc[k];
    }

    PathSample path;
    path.meta = {"euler", seed, dt, static_cast<double>(B) * dt, false};
    path.t.reserve(N + 1);
    path.x.reserve(N + 1);
    for (size_t i = 0; i <= N; ++i) {
        path.t.push_back(dt * static_cast<double>(i));
        path.x.push_back(x[base + B + i]);
    }
    return path;
}

MultiPathSample simulate_ma_matrix(const MatrixKernelGrid& g, const SubordinatorSpec& s, double T,
                                   uint64_t seed) {
    if (g.values.empty()) throw std::invalid_argument("empty kernel grid");
    if (!(T > 0.0)) throw std::invalid_argument("path length must be positive");
    const double dt = g.dt;
    const size_t d = g.dim();
    const size_t K = g.values.size();
    const auto N = static_cast<size_t>(std::lround(T / dt));

    MultiPathSample path;
    double tail = g.values.back().cwiseAbs().maxCoeff();
    path.meta = {"ma", seed, dt, static_cast<double>(K) * dt, tail > 1e-4};

    std::vector<std::vector<double>> inc(d);
    for (size_t c = 0; c < d; ++c) inc[c] = sample_increments(s, dt, N + K, seed, c);

    path.t.reserve(N + 1);
    path.x.reserve(N + 1);
    for (size_t i = 0; i <= N; ++i) {
        std::vector<double> xi(d, 0.0);
        for (size_t m = 0; m < K; ++m) {
            const auto& G = g.values[m];
            for (size_t j = 0; j < d; ++j)
                for (size_t c = 0; c < d; ++c)
                    xi[j] += G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) *
                             inc[c][K + i - 1 - m];
        }
        path.t.push_back(dt * static_cast<double>(i));
        path.x.push_back(std::move(xi));
    }
    return path;
}

PathStats path_stats(const PathSample& p) {
    if (p.x.empty()) throw std::invalid_argument("empty path");
    PathStats stats;
    size_t best = 0;
    double sum = 0.0;
    size_t negative = 0;
    for (size_t i = 0; i < p.x.size(); ++i) {
        if (p.x[i] < p.x[best]) best = i;
        sum += p.x[i];
        if (p.x[i] < -1e-12) ++negative;
    }
    stats.min = p.x[best];
    stats.argmin = p.t[best];
    stats.mean = sum / static_cast<double>(p.x.size());
    stats.fraction_negative = static_cast<double>(negative) / static_cast<double>(p.x.size());
    return stats;
}

}  // namespace sdde
