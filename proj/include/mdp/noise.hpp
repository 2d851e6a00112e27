#pragma once

#include <cstdint>
#include <random>
#include <string>

// Demand-noise generators with certified subgaussian scale, and
// deterministic counter-split RNG streams (one per replication).

namespace mdp {

// Deterministic stream keyed by (master_seed, run, replication). Streams for
// distinct keys are independent; identical keys give identical draws.
class RngStream {
  public:
    RngStream() : RngStream(0, 0, 0) {}
    RngStream(uint64_t master_seed, uint64_t run_index, uint64_t replication_index);

    uint64_t next_u64() { return engine_(); }
    // Uniform in [0,1) with 53 random bits.
    double uniform01();
    // Standard normal via Box-Muller (two uniforms per draw; deterministic,
    // no cached state).
    double gaussian();
    bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::mt19937_64 engine_;
};

enum class NoiseKind { gaussian_clipped, bernoulli, none };

std::string noise_name(NoiseKind k);
NoiseKind noise_from_name(const std::string& name);

struct NoiseModel {
    NoiseKind kind = NoiseKind::bernoulli;
    double sigma = 0.1;  // gaussian_clipped only
    double c_sg = 1.0;   // certified subgaussian scale of the realized demand
};

// Certifies c_sg: sigma*sqrt(8/3) for clipped Gaussian (clipping only
// shrinks tails), 1 for Bernoulli, 0 for the noiseless mode.
NoiseModel make_noise(NoiseKind kind, double sigma = 0.1);

// One demand realization with the given mean, always in [0,1]. Bernoulli
// requires mean in [0,1] (model error otherwise).
double sample_demand(double mean, const NoiseModel& noise, RngStream& rng);

}  // namespace mdp
