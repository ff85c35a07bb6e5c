#include "padic/random.hpp"

namespace padic {

namespace {

mpz_class uniform_below(const mpz_class& bound, std::mt19937_64& rng) {
    // bound is small in practice; compose from 64-bit draws
    mpz_class acc = 0;
    mpz_class range = 1;
    while (range < bound) {
        acc = acc * mpz_class(static_cast<unsigned long>(1) << 32) + (rng() & 0xffffffffUL);
        range *= mpz_class(static_cast<unsigned long>(1) << 32);
    }
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), acc.get_mpz_t(), bound.get_mpz_t());
    return r;
}

}  // namespace

PAdicRational random_point(Prime p, std::mt19937_64& rng, int max_scale, int max_int_digits) {
    std::uniform_int_distribution<int> scale_dist(0, max_scale);
    const long k = scale_dist(rng);
    const mpz_class bound = p.pow(static_cast<unsigned long>(max_scale + max_int_digits));
    mpz_class m = uniform_below(2 * bound - 1, rng) - (bound - 1);
    return PAdicRational(p, m, k);
}

PAdicRational random_on_sphere(const PAdicRational& x, long radius_exponent, std::mt19937_64& rng) {
    const Prime p = x.prime();
    // a unit u of Z[1/p] is an integer prime to p
    std::uniform_int_distribution<long> dist(1, 1'000'000);
    long u = dist(rng);
    while (u % static_cast<long>(p.value()) == 0) u = dist(rng);
    if (rng() & 1) u = -u;
    return x + PAdicRational(p, u).scaled(-radius_exponent);
}

FractionalIndex random_fraction(Prime p, std::mt19937_64& rng, int max_depth) {
    std::uniform_int_distribution<int> depth_dist(0, max_depth);
    const long k = depth_dist(rng);
    if (k == 0) return FractionalIndex::zero(p);
    return FractionalIndex::make(p, uniform_below(p.pow(static_cast<unsigned long>(k)), rng), k);
}

}  // namespace padic
