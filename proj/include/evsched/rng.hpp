#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace evsched {

// Seeded RNG with platform-stable derived draws. The engine (mt19937_64) is
// specified bit-exactly by the standard; the mapping helpers below avoid
// std::uniform_*_distribution, whose output may differ between standard
// library implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // Inclusive range. Modulo bias is irrelevant for the tiny ranges used here.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    double uniform(double lo = 0.0, double hi = 1.0) {
        const double u = static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
        return lo + u * (hi - lo);
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(next() % v.size())];
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace evsched
