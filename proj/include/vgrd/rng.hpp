#ifndef VGRD_RNG_HPP
#define VGRD_RNG_HPP

#include <cmath>
#include <cstdint>

namespace vgrd {

// SplitMix64 finalizer. Statistically strong enough for Monte Carlo when
// applied to a (key, counter) pair, and trivially parallel.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based random stream: the i-th draw depends only on (seed, stream, i),
// never on which thread produced it or how work was chunked.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(~stream))) {}

    std::uint64_t next_u64() {
        return mix64(key_ ^ mix64(ctr_++ * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL));
    }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal, Box-Muller (two uniforms per pair, second value cached)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do {
            u = uniform();
        } while (u <= 0.0);
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace vgrd

#endif // VGRD_RNG_HPP
