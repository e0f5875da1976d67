#pragma once

#include <cstdint>
#include <random>

namespace dpeval::detail {

// Uniform doubles in [0, 1) from the top 53 bits of mt19937_64, so seeded
// streams do not depend on the standard library's distribution code.
class UnitRandom {
public:
    explicit UnitRandom(std::uint64_t seed) : engine_(seed) {}
    double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace dpeval::detail
