#pragma once

#include <cstdint>
#include <random>

namespace qwalk {

// splitmix64 finalizer; used to derive per-realization seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Portable stream: mt19937_64 engine plus hand-written transforms, so the same
// seed yields the same numbers with any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }
    // uniform in [0,1) with 53 random bits
    double uniform();
    // uniform integer in [0, n) by rejection
    std::uint64_t below(std::uint64_t n);
    // standard normal, Box-Muller cosine branch, exactly two uniforms per draw
    double normal();

    std::uint64_t draws() const { return draws_; }

private:
    std::mt19937_64 eng_;
    std::uint64_t draws_ = 0;
};

}  // namespace qwalk
