#include "sdde/levy.hpp"

#include <cmath>
#include <stdexcept>

namespace sdde {

namespace {

uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.28318530717958647692;

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) : state_(seed) {
    // Fold the stream id in through one mixing round so adjacent streams
    // start far apart in the sequence.
    uint64_t s = stream + 0xD1B54A32D192ED03ULL;
    state_ ^= splitmix64(s);
}

uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::gamma_variate(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0) {
        // Boost from shape + 1 back down with a power of an extra uniform.
        double u = uniform();
        return gamma_variate(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::inverse_gaussian(double mean, double shape) {
    if (!(mean > 0.0) || !(shape > 0.0))
        throw std::invalid_argument("inverse gaussian parameters must be positive");
    double y = normal();
    y *= y;
    double x = mean + mean * mean * y / (2.0 * shape) -
               mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
    if (x < 0.0) x = 0.0;
    double u = uniform();
    if (u <= mean / (mean + x)) return x;
    return x > 0.0 ? mean * mean / x : mean;
}

long Rng::poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson mean must be non-negative");
    long count = 0;
    // exp(-mean) underflows near 745; draw in bounded chunks.
    while (mean > 500.0) {
        count += poisson(500.0);
        mean -= 500.0;
    }
    double limit = std::exp(-mean);
    double product = uniform();
    while (product > limit) {
        ++count;
        product *= uniform();
    }
    return count;
}

void validate(const SubordinatorSpec& spec) {
    if (!(spec.drift >= 0.0)) throw std::invalid_argument("drift must be non-negative");
    if (!spec.jumps) return;
    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&*spec.jumps)) {
        if (!(cp->rate > 0.0)) throw std::invalid_argument("jump rate must be positive");
        if (const auto* e = std::get_if<ExponentialJump>(&cp->jump)) {
            if (!(e->mean > 0.0)) throw std::invalid_argument("jump mean must be positive");
        } else if (!(std::get<ConstantJump>(cp->jump).size > 0.0)) {
            throw std::invalid_argument("jump size must be positive");
        }
    } else if (const auto* g = std::get_if<GammaJumps>(&*spec.jumps)) {
        if (!(g->shape > 0.0) || !(g->rate > 0.0))
            throw std::invalid_argument("gamma parameters must be positive");
    } else {
        const auto& ig = std::get<InverseGaussianJumps>(*spec.jumps);
        if (!(ig.mean > 0.0) || !(ig.shape > 0.0))
            throw std::invalid_argument("inverse gaussian parameters must be positive");
    }
}

double mean_rate(const SubordinatorSpec& spec) {
    validate(spec);
    double rate = spec.drift;
    if (!spec.jumps) return rate;
    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&*spec.jumps)) {
        double jump_mean = cp->jump.index() == 0 ? std::get<ExponentialJump>(cp->jump).mean
                                                 : std::get<ConstantJump>(cp->jump).size;
        rate += cp->rate * jump_mean;
    } else if (const auto* g = std::get_if<GammaJumps>(&*spec.jumps)) {
        rate += g->shape / g->rate;
    } else {
        rate += std::get<InverseGaussianJumps>(*spec.jumps).mean;
    }
    return rate;
}

std::vector<double> sample_increments(const SubordinatorSpec& spec, double dt, size_t n,
                                      uint64_t seed, uint64_t stream) {
    validate(spec);
    if (!(dt > 0.0)) throw std::invalid_argument("step must be positive");
    Rng rng(seed, stream);
    std::vector<double> out(n, spec.drift * dt);
    if (!spec.jumps) return out;

    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&*spec.jumps)) {
        for (auto& v : out) {
            long jumps = rng.poisson(cp->rate * dt);
            if (const auto* e = std::get_if<ExponentialJump>(&cp->jump)) {
                for (long j = 0; j < jumps; ++j) v += -e->mean * std::log(rng.uniform());
            } else {
                v += static_cast<double>(jumps) * std::get<ConstantJump>(cp->jump).size;
            }
        }
    } else if (const auto* g = std::get_if<GammaJumps>(&*spec.jumps)) {
        for (auto& v : out) v += rng.gamma_variate(g->shape * dt) / g->rate;
    } else {
        const auto& ig = std::get<InverseGaussianJumps>(*spec.jumps);
        for (auto& v : out) v += rng.inverse_gaussian(ig.mean * dt, ig.shape * dt * dt);
    }
    return out;
}

}  // namespace sdde
