#pragma once

#include <cstdint>
#include <random>

namespace onum {

/// Purpose tag mixed into a stream seed. Each (repeat, role) pair gets its
/// own generator so that a policy change never shifts the reward draws.
enum class StreamRole : std::uint64_t {
    Rewards = 0x52455741u,        // "REWA"
    PosteriorSampling = 0x504f5354u,  // "POST"
    Binarization = 0x42494e41u,   // "BINA"
    Baseline = 0x42415345u,       // "BASE"
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the stream for (base_seed, repeat, role):
/// splitmix64(splitmix64(base_seed ^ repeat) ^ role).
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t repeat, StreamRole role);

/// mt19937_64 with hand-rolled distributions. The standard library
/// distributions are implementation-defined, which would break
/// cross-platform reproducibility of the CSV outputs.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n), n >= 1, rejection sampled (no modulo bias).
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal, Marsaglia polar method (spare value cached).
    double normal();

    /// Gamma(shape, 1), Marsaglia-Tsang; shape < 1 handled by boosting.
    double gamma(double shape);

    double beta(double a, double b);

    bool operator==(const Rng& other) const {
        return engine_ == other.engine_ && has_spare_ == other.has_spare_ &&
               (!has_spare_ || spare_ == other.spare_);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace onum
