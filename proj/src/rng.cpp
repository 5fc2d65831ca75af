#include "slarag/rng.hpp"

#include "slarag/text.hpp"

namespace slarag {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream RngStream::derive(std::uint64_t master_seed, std::string_view label_a,
                            std::string_view label_b) {
    std::uint64_t h = splitmix64(master_seed);
    h = text::fnv1a64(label_a, h);
    h = text::fnv1a64("\x1f", h);  // separator so ("ab","c") != ("a","bc")
    h = text::fnv1a64(label_b, h);
    return RngStream(splitmix64(h));
}

RngStream RngStream::derive(std::uint64_t master_seed, std::string_view label, std::uint64_t index) {
    std::uint64_t h = text::fnv1a64(label, splitmix64(master_seed));
    return RngStream(splitmix64(h ^ splitmix64(index)));
}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
}

} // namespace slarag
