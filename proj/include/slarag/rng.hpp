#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace slarag {

// A seeded random stream. Streams are derived from a master seed plus
// string/integer labels so that the draws an agent (or a Monte Carlo
// trial) sees never depend on scheduling order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream derive(std::uint64_t master_seed, std::string_view label_a,
                            std::string_view label_b = {});
    static RngStream derive(std::uint64_t master_seed, std::string_view label, std::uint64_t index);

    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform in [0, n). n must be > 0.
    std::size_t index(std::size_t n);
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace slarag
