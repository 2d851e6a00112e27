#include "mdp/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "mdp/demand.hpp"

namespace mdp {

namespace {

// splitmix64 finalizer; mixes the key words into one seed.
uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(uint64_t master_seed, uint64_t run_index,
                     uint64_t replication_index)
    : engine_(mix(mix(mix(master_seed) ^ run_index) ^
                  mix(replication_index ^ 0xa5a5a5a5a5a5a5a5ull))) {}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    // Box-Muller, cosine branch only, so one call consumes exactly two
    // uniforms regardless of history.
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::string noise_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::gaussian_clipped: return "gaussian_clipped";
        case NoiseKind::bernoulli: return "bernoulli";
        case NoiseKind::none: return "none";
    }
    return "?";
}

NoiseKind noise_from_name(const std::string& name) {
    if (name == "gaussian_clipped") return NoiseKind::gaussian_clipped;
    if (name == "bernoulli") return NoiseKind::bernoulli;
    if (name == "none") return NoiseKind::none;
    throw model_error("unknown noise kind: " + name);
}

NoiseModel make_noise(NoiseKind kind, double sigma) {
    NoiseModel m;
    m.kind = kind;
    m.sigma = sigma;
    switch (kind) {
        case NoiseKind::gaussian_clipped:
            // Clipping to an interval only sharpens the tails, so the
            // unclipped bound sigma*sqrt(8/3) certifies the clipped variable.
            m.c_sg = sigma * std::sqrt(8.0 / 3.0);
            break;
        case NoiseKind::bernoulli:
            m.c_sg = 1.0;
            break;
        case NoiseKind::none:
            m.c_sg = 0.0;
            break;
    }
    return m;
}

double sample_demand(double mean, const NoiseModel& noise, RngStream& rng) {
    switch (noise.kind) {
        case NoiseKind::gaussian_clipped: {
            double d = mean + noise.sigma * rng.gaussian();
            return d < 0.0 ? 0.0 : (d > 1.0 ? 1.0 : d);
        }
        case NoiseKind::bernoulli:
            if (mean < -1e-12 || mean > 1.0 + 1e-12)
                throw model_error("bernoulli demand: mean outside [0,1]");
            return rng.bernoulli(mean) ? 1.0 : 0.0;
        case NoiseKind::none:
            return mean;
    }
    return mean;
}

}  // namespace mdp
