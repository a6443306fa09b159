#pragma once

#include <cstdint>
#include <string_view>

namespace afcsim {

/// splitmix64 stream. Self-contained so that Monte Carlo results are
/// bit-identical across platforms and independent of execution order:
/// every trial gets its own stream derived from (seed, trial index).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform double in [0, 1).
    double uniform();
    /// Standard normal (Box-Muller, cached spare).
    double gaussian();
    /// Poisson sample: Knuth's product method for small means, Hormann's
    /// transformed rejection (PTRS) above.
    std::uint64_t poisson(double mean);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Deterministic seed mixing for substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// FNV-1a 64 over bytes, folded with a seed; used to derive per-run streams
/// from labels and to hash canonical config text.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 1469598103934665603ULL);

inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
    return Rng(mix_seed(seed, trial));
}

}  // namespace afcsim
