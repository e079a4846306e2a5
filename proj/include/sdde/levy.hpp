#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace sdde {

/// Counter-style generator: splitmix64 stepping, streams split off a common
/// seed so independent components never share draws. All samplers below
/// consume this sequentially, so output is reproducible per (seed, stream).
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint64_t next_u64();
    double uniform();  // strictly inside (0, 1)
    double normal();   // standard normal via Box-Muller, two uniforms per draw
    double gamma_variate(double shape);  // unit rate, Marsaglia-Tsang
    double inverse_gaussian(double mean, double shape);  // Michael-Schucany-Haas
    long poisson(double mean);  // Knuth product method, chunked for large means

private:
    uint64_t state_;
};

struct ExponentialJump {
    double mean = 1.0;  // > 0
};
struct ConstantJump {
    double size = 1.0;  // > 0
};
struct CompoundPoissonJumps {
    double rate = 1.0;  // > 0
    std::variant<ExponentialJump, ConstantJump> jump;
};
struct GammaJumps {
    double shape = 1.0;  // > 0, per unit time
    double rate = 1.0;   // > 0
};
struct InverseGaussianJumps {
    double mean = 1.0;   // > 0, per unit time
    double shape = 1.0;  // > 0, per unit time squared
};

/// Non-decreasing driver: deterministic drift plus at most one jump part.
/// Every admissible spec has finite mean and exactly samplable increments.
struct SubordinatorSpec {
    double drift = 0.0;  // >= 0
    std::optional<std::variant<CompoundPoissonJumps, GammaJumps, InverseGaussianJumps>> jumps;
};

/// Throws when a parameter is outside its admissible range.
void validate(const SubordinatorSpec& spec);

/// E[L_1] in closed form.
double mean_rate(const SubordinatorSpec& spec);

/// n independent increments of L over consecutive steps of length dt, all
/// non-negative, byte-identical for equal (spec, dt, n, seed, stream).
std::vector<double> sample_increments(const SubordinatorSpec& spec, double dt, size_t n,
                                      uint64_t seed, uint64_t stream = 0);

}  // namespace sdde
