#pragma once

#include "imlab/types.hpp"

#include <random>

namespace imlab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-trial seeds from a
/// master seed and a counter.
constexpr Seed mix_seed(Seed x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr Seed derive_seed(Seed master, Seed counter) {
    return mix_seed(mix_seed(master) ^ mix_seed(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform real in [0, 1) built from the raw engine output so that results do
/// not depend on a particular standard-library distribution implementation.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Index drawn from a discrete distribution given by a row of weights.
template <typename Row>
int sample_index(const Row& probs, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    const int n = static_cast<int>(probs.size());
    int last_positive = 0;
    for (int i = 0; i < n; ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = i;
        acc += probs[i];
        if (u < acc) return i;
    }
    return last_positive;
}

} // namespace imlab
