#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace jsqlab {

// Deterministic RNG stream: mt19937_64 plus explicit float conversions, so
// identical seeds give bit-identical streams regardless of the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1)
    double uniform_pos() { return ((eng_() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // Box-Muller pair, one value cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos();
        double v = uniform_pos();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // integer in [0, m)
    std::uint64_t below(std::uint64_t m) { return eng_() % m; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace jsqlab
