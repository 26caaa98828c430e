#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace gradgibbs {

// Counter-based PRNG: output i of a stream is finalize(key + i*gamma), the
// splitmix64 construction. Counter-based means a chain's randomness is a pure
// function of (seed, stream name, draw index) -- no hidden state evolves, so
// runs are reproducible bit-for-bit no matter how work is scheduled across
// threads, and every named stream (one per chain) is independent.
//
// Gaussians come from Box-Muller on the raw uniforms rather than from
// std::normal_distribution, whose algorithm is implementation-defined; with
// Box-Muller the whole observable stream is pinned by this header alone.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::string_view stream) {
        // FNV-1a over the stream name keys the stream apart from the seed.
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : stream) {
            h ^= c;
            h *= 1099511628211ull;
        }
        key_ = finalize(finalize(seed) ^ h);
    }

    explicit CounterRng(std::uint64_t seed) : CounterRng(seed, "default") {}

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ull;  // golden-ratio increment
        return finalize(key_ + counter_);
    }

    // Uniform on the open interval (0,1): 53-bit mantissa, shifted off zero.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal; Box-Muller produces pairs, the second is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;  // 2*pi*u2
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t finalize(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace gradgibbs
