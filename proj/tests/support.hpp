#pragma once

// Shared fixtures: literal construction helpers, random generators and small
// independent oracles used across the test binaries.

#include "padic/core.hpp"
#include "padic/kernels.hpp"
#include "padic/random.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>

namespace padic::testing {

inline PAdicRational Q(unsigned long p, const std::string& text) { return PAdicRational::parse(Prime(p), text); }

inline FractionalIndex F(unsigned long p, long m, long k) { return FractionalIndex::make(Prime(p), mpz_class(m), k); }

inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1e-300, std::abs(a), std::abs(b)});
}

/// Random finite table kernel: a handful of balls with gamma in
/// [gamma_lo, gamma_hi] and positions of depth <= max_depth.
inline TableKernel random_table_kernel(Prime p, std::mt19937_64& rng, long gamma_lo = -3, long gamma_hi = 3,
                                       int max_depth = 3, int entries = 10) {
    std::uniform_int_distribution<long> gamma(gamma_lo, gamma_hi);
    std::uniform_real_distribution<double> value(0.05, 2.0);
    std::map<BallIndex, double> table;
    for (int i = 0; i < entries; ++i) table[{gamma(rng), random_fraction(p, rng, max_depth)}] = value(rng);
    return TableKernel(p, std::move(table));
}

/// Eigenvalue series written out directly, term by term, up to level `top`:
/// p^g T(g, n) + (1 - 1/p) sum_{g < g' <= top} p^g' T(g', frac(p^(g'-g) n)).
/// Ancestors are found by scaling the centre, independently of AncestorChain.
inline double naive_eigenvalue(const KernelCoefficients& K, long gamma, const FractionalIndex& n, long top) {
    const Prime p = K.prime();
    const double pv = static_cast<double>(p.value());
    double sum = 0.0;
    for (long g = gamma + 1; g <= top; ++g) {
        const FractionalIndex ancestor = frac(n.to_rational().scaled(g - gamma));
        sum += std::pow(pv, static_cast<double>(g)) * K.coeff(g, ancestor);
    }
    return std::pow(pv, static_cast<double>(gamma)) * K.coeff(gamma, n) + (1.0 - 1.0 / pv) * sum;
}

}  // namespace padic::testing
