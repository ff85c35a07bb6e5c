#pragma once

// Relaxation observables of exp(-tT) through the wavelet eigen-expansion:
// survival of the unit ball and correlations between ball indicators.

#include "padic/core.hpp"
#include "padic/kernels.hpp"
#include "padic/spectra.hpp"

#include <map>
#include <ostream>
#include <shared_mutex>
#include <span>
#include <vector>

namespace padic {

/// Memoized lambda_(gamma, n). Concurrent lookups are safe; a value is
/// computed outside the lock and the first insertion wins, which is harmless
/// because every thread computes the same number.
class EigenvalueCache {
public:
    EigenvalueCache(const KernelCoefficients& K, double tol = default_tol) : K_(K), tol_(tol) {}

    const KernelCoefficients& kernel() const noexcept { return K_; }
    double lambda(long gamma, const FractionalIndex& n) const;

private:
    const KernelCoefficients& K_;
    double tol_;
    mutable std::shared_mutex mutex_;
    mutable std::map<BallIndex, double> values_;
};

struct SeriesValue {
    double value;
    double remainder_bound;
    long truncation_level;
};

/// S(t) = <Omega, exp(-tT) Omega> = (p-1) sum_{gamma>=1} p^-gamma exp(-t lambda_(gamma,0)).
/// Truncated at the first Gamma with p^-Gamma < tol; the dropped tail is
/// certified to lie within remainder_bound of the returned value.
SeriesValue survival(const EigenvalueCache& cache, double t, double tol = default_tol);
SeriesValue survival(const KernelCoefficients& K, double t, double tol = default_tol);

/// <Omega_a, exp(-tT) Omega_b> for the ball indicators Omega_a, Omega_b. The
/// remainder is bounded by tol * sqrt(|a| |b|).
SeriesValue displaced_correlation(const EigenvalueCache& cache, const BallIndex& a, const BallIndex& b, double t,
                                  double tol = default_tol);
SeriesValue displaced_correlation(const KernelCoefficients& K, const BallIndex& a, const BallIndex& b, double t,
                                  double tol = default_tol);

/// Survival for the generator restricted to |x|_p <= p^R; the p^-R term is
/// the conserved constant mode.
double survival_restricted(const KernelCoefficients& K, double t, long R);

struct SurvivalSample {
    double t;
    double survival;
    double remainder_bound;
    long truncation_level;
};

struct SurvivalCurve {
    std::vector<SurvivalSample> samples;
};

/// Samples are evaluated in parallel; the result does not depend on the
/// thread count.
SurvivalCurve survival_curve(const KernelCoefficients& K, std::span<const double> times, double tol = default_tol);
SurvivalCurve survival_restricted_curve(const KernelCoefficients& K, std::span<const double> times, long R);

/// Header `t,survival,remainder_bound`, 17 significant digits.
void write_csv(std::ostream& out, const SurvivalCurve& curve);

}  // namespace padic
