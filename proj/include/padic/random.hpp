#pragma once

#include "padic/core.hpp"

#include <random>

namespace padic {

/// Random m / p^k with 0 <= k <= max_scale and |m| < p^(max_scale + max_int_digits).
PAdicRational random_point(Prime p, std::mt19937_64& rng, int max_scale = 6, int max_int_digits = 6);

/// Random point at distance exactly p^radius_exponent from x.
PAdicRational random_on_sphere(const PAdicRational& x, long radius_exponent, std::mt19937_64& rng);

/// Random canonical fraction of depth at most max_depth.
FractionalIndex random_fraction(Prime p, std::mt19937_64& rng, int max_depth);

}  // namespace padic
