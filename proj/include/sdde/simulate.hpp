#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdde/kernel.hpp"
#include "sdde/levy.hpp"
#include "sdde/measure.hpp"
#include "sdde/multivar.hpp"

namespace sdde {

struct PathMeta {
    std::string scheme;
    uint64_t seed = 0;
    double dt = 0.0;
    double burn_in = 0.0;       // time units discarded before t = 0
    bool tail_warning = false;  // kernel tail above 1e-4 at the horizon
};

struct PathSample {
    std::vector<double> t;
    std::vector<double> x;
    PathMeta meta;
};

/// Moving-average path on the kernel's grid: X_i is the convolution of g with
/// driver increments over the trailing window of one kernel length, with the
/// pre-sample window drawn from the same spec so the path starts stationary.
/// Increments are consumed chronologically from t = -horizon; the k-th kernel
/// weight multiplies the increment over ((i-1-k) dt, (i-k) dt]. When g >= 0
/// every output is a sum of non-negative products, hence >= 0 exactly.
PathSample simulate_ma(const KernelGrid& g, const SubordinatorSpec& s, double T, uint64_t seed);

/// Explicit Euler step for the delay equation,
///   X_{k+1} = X_k + dt (-lambda0 X_k + sum_j xi_j X_{k-m_j}
///             + trapezoid of density against the stored history) + dL_k,
/// with atom lags snapped to grid multiples, history zero before the start,
/// and the first burn_in time units discarded. burn_in < 0 selects the
/// default of 20 time constants of the slowest mode. The increment stream is
/// consumed chronologically from t = -burn_in, so a moving-average path with
/// kernel horizon equal to burn_in sees the same draws.
PathSample simulate_euler(const DelayMeasure& phi, const SubordinatorSpec& s, double T, double dt,
                          uint64_t seed, double burn_in = -1.0);

struct MultiPathSample {
    std::vector<double> t;
    std::vector<std::vector<double>> x;  // x[i] is the d-vector at t[i]
    PathMeta meta;
};

/// Componentwise moving-average path driven by d independent copies of the
/// subordinator (streams split off the seed), convolved against the matrix
/// kernel with the same window convention as simulate_ma.
MultiPathSample simulate_ma_matrix(const MatrixKernelGrid& g, const SubordinatorSpec& s, double T,
                                   uint64_t seed);

struct PathStats {
    double min = 0.0;
    double argmin = 0.0;  // time of the minimum
    double mean = 0.0;
    double fraction_negative = 0.0;  // entries below -1e-12
};

PathStats path_stats(const PathSample& p);

}  // namespace sdde
