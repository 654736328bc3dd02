#pragma once

#include <cstdint>

namespace ndtaxis {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// splitmix64 stream with a fully specified output sequence, so seeded
/// fields are identical across standard library implementations.
class SplitMixStream {
public:
    explicit SplitMixStream(std::uint64_t seed) : state_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        state_ = splitmix64(state_);
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace ndtaxis
