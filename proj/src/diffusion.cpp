#include "padic/diffusion.hpp"

#include "padic/concurrency.hpp"
#include "padic/format.hpp"
#include "padic/wavelets.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace padic {

double EigenvalueCache::lambda(long gamma, const FractionalIndex& n) const {
    const BallIndex key{gamma, n};
    {
        std::shared_lock lock(mutex_);
        if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double value = eigenvalue(K_, gamma, n, tol_).lambda;
    std::unique_lock lock(mutex_);
    return values_.try_emplace(key, value).first->second;
}

namespace {

void check_time(double t, double tol) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and non-negative");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

// Smallest level L >= floor with p^(offset - L) < tol.
long truncation_level(Prime p, double offset, double tol, long floor) {
    long level = std::max(floor, static_cast<long>(std::floor(offset + std::log(1.0 / tol) / std::log(p.value()))));
    while (p.real_pow(offset - static_cast<double>(level)) >= tol) ++level;
    return level;
}

// Tail sum_{gamma' > level} (p-1) p^(weight_exp - gamma') exp(-t lambda_(gamma', 0))
// lies in [0, p^(weight_exp - level)]. With chain-monotone coefficients the
// eigenvalues decrease along gamma', which raises the lower end to
// p^(weight_exp - level) exp(-t lambda_(level+1, 0)).
SeriesValue certified_tail(const EigenvalueCache& cache, long level, double weight_exp, double t, double partial) {
    const Prime p = cache.kernel().prime();
    const double mass = p.real_pow(weight_exp - static_cast<double>(level));
    if (!cache.kernel().chain_monotone()) return {partial, mass, level};
    const double lower = mass * std::exp(-t * cache.lambda(level + 1, FractionalIndex::zero(p)));
    return {partial + lower, mass - lower, level};
}

}  // namespace

SeriesValue survival(const EigenvalueCache& cache, double t, double tol) {
    check_time(t, tol);
    const Prime p = cache.kernel().prime();
    const FractionalIndex zero = FractionalIndex::zero(p);
    const long level = truncation_level(p, 0.0, tol, 1);
    const double pm1 = static_cast<double>(p.value() - 1);
    double sum = 0.0;
    for (long g = 1; g <= level; ++g)
        sum += pm1 * p.real_pow(-static_cast<double>(g)) * std::exp(-t * cache.lambda(g, zero));
    return certified_tail(cache, level, 0.0, t, sum);
}

SeriesValue survival(const KernelCoefficients& K, double t, double tol) {
    EigenvalueCache cache(K);
    return survival(cache, t, tol);
}

SeriesValue displaced_correlation(const EigenvalueCache& cache, const BallIndex& a, const BallIndex& b, double t,
                                  double tol) {
    check_time(t, tol);
    const Prime p = cache.kernel().prime();
    require_same_prime(p, a.n.prime());
    require_same_prime(p, b.n.prime());

    // above both stabilization levels every common wavelet is centred at 0
    // with trivial phase
    const double weight_exp = static_cast<double>(a.gamma + b.gamma);
    const long floor = std::max({a.gamma, b.gamma, a.gamma + a.n.depth(), b.gamma + b.n.depth()});
    const long level = truncation_level(p, 0.5 * weight_exp, tol, floor);

    const WaveletExpansion ea = indicator_expansion(a.gamma, a.n, level);
    const WaveletExpansion eb = indicator_expansion(b.gamma, b.n, level);
    std::map<WaveletIndex, const WaveletTerm*> b_terms;
    for (const WaveletTerm& term : eb.terms) b_terms.emplace(term.index, &term);

    double sum = 0.0;
    for (const WaveletTerm& ta : ea.terms) {
        auto it = b_terms.find(ta.index);
        if (it == b_terms.end()) continue;
        const WaveletTerm& tb = *it->second;
        const std::complex<double> pair = (ta.phase * tb.phase.conj()).to_complex();
        sum += ta.magnitude * tb.magnitude * pair.real() * std::exp(-t * cache.lambda(ta.index.gamma(), ta.index.n()));
    }
    return certified_tail(cache, level, weight_exp, t, sum);
}

SeriesValue displaced_correlation(const KernelCoefficients& K, const BallIndex& a, const BallIndex& b, double t,
                                  double tol) {
    EigenvalueCache cache(K);
    return displaced_correlation(cache, a, b, t, tol);
}

double survival_restricted(const KernelCoefficients& K, double t, long R) {
    check_time(t, 1.0);
    if (R < 1) throw std::invalid_argument("survival_restricted: R must be >= 1");
    const Prime p = K.prime();
    const FractionalIndex zero = FractionalIndex::zero(p);
    const double pm1 = static_cast<double>(p.value() - 1);
    double sum = 0.0;
    for (long g = 1; g <= R; ++g)
        sum += pm1 * p.real_pow(-static_cast<double>(g)) * std::exp(-t * eigenvalue_restricted(K, g, zero, R));
    return sum + p.real_pow(-static_cast<double>(R));
}

SurvivalCurve survival_curve(const KernelCoefficients& K, std::span<const double> times, double tol) {
    EigenvalueCache cache(K);
    SurvivalCurve curve;
    curve.samples.resize(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
        const SeriesValue s = survival(cache, times[i], tol);
        curve.samples[i] = {times[i], s.value, s.remainder_bound, s.truncation_level};
    });
    return curve;
}

SurvivalCurve survival_restricted_curve(const KernelCoefficients& K, std::span<const double> times, long R) {
    SurvivalCurve curve;
    curve.samples.resize(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
        curve.samples[i] = {times[i], survival_restricted(K, times[i], R), 0.0, R};
    });
    return curve;
}

void write_csv(std::ostream& out, const SurvivalCurve& curve) {
    out << "t,survival,remainder_bound\n";
    for (const SurvivalSample& s : curve.samples)
        out << format_double(s.t) << ',' << format_double(s.survival) << ',' << format_double(s.remainder_bound) << '\n';
}

}  // namespace padic
