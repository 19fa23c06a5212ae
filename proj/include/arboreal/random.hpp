#pragma once

#include <cstdint>

namespace arboreal {

/// Deterministic uniform double in [lo, hi) from a raw 64-bit generator.
/// Hand-rolled so draws do not depend on the standard library's
/// distribution implementation.
template <class Rng>
double uniform_double(Rng& rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

}  // namespace arboreal
