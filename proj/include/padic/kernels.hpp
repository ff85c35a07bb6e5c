#pragma once

// Ultrametric kernels T(x, y). A kernel is given by non-negative coefficients
// T^(gamma, n), one per ball of radius p^gamma; T(x, y) is the coefficient of
// the smallest ball containing both points.

#include "padic/core.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

namespace padic {

class KernelCoefficients {
public:
    explicit KernelCoefficients(Prime p) : prime_(p) {}
    virtual ~KernelCoefficients() = default;

    Prime prime() const noexcept { return prime_; }

    virtual double coeff(long gamma, const FractionalIndex& n) const = 0;

    /// sum_{gamma' > gamma0} p^gamma' coeff(gamma', 0), when known in closed form.
    virtual std::optional<double> tail_sum(long gamma0) const;
    virtual bool has_tail_sum() const { return false; }

    /// True when only finitely many coefficients are non-zero.
    virtual bool finitely_supported() const { return false; }

    /// True when coeff(gamma - 1, n / p) >= coeff(gamma, n) along every chain.
    virtual bool chain_monotone() const { return false; }

    /// Pointwise value T(x, y), x != y. Defaults to the coefficient of the
    /// separating ball; pointwise sources may override it.
    virtual double evaluate_pair(const PAdicRational& x, const PAdicRational& y) const;

private:
    Prime prime_;
};

/// f(p^gamma) as a finite table over gamma, optionally on top of the power
/// law p^(-gamma (1 + alpha)). Table entries replace the background.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(std::map<long, double> table, std::optional<double> alpha);

    double operator()(Prime p, long gamma) const;
    /// sum_{gamma > gamma0} p^gamma f(p^gamma); nullopt if the background
    /// does not decay (alpha <= 0).
    std::optional<double> weighted_tail(Prime p, long gamma0) const;

    const std::map<long, double>& table() const noexcept { return table_; }
    const std::optional<double>& alpha() const noexcept { return alpha_; }

private:
    std::map<long, double> table_;
    std::optional<double> alpha_;
};

/// g as a function of a norm p^e (by exponent e) plus a separate value at 0.
/// Unlisted exponents give 0.
struct NormProfile {
    std::map<long, double> table;
    double at_zero = 0.0;

    double at_exponent(long e) const {
        auto it = table.find(e);
        return it == table.end() ? 0.0 : it->second;
    }
};

/// coeff(gamma, n) = p^(-gamma (1 + alpha)): the kernel |x - y|^(-1-alpha).
class RadialPowerKernel final : public KernelCoefficients {
public:
    RadialPowerKernel(Prime p, double alpha);

    double alpha() const noexcept { return alpha_; }

    double coeff(long gamma, const FractionalIndex& n) const override;
    std::optional<double> tail_sum(long gamma0) const override;
    bool has_tail_sum() const override { return true; }
    bool chain_monotone() const override { return true; }

private:
    double alpha_;
};

/// Translation-invariant kernel f(|x - y|_p).
class RadialKernel final : public KernelCoefficients {
public:
    RadialKernel(Prime p, RadialProfile f);
    /// Arbitrary radial function without a closed-form tail.
    RadialKernel(Prime p, std::function<double(long)> f);

    double coeff(long gamma, const FractionalIndex& n) const override;
    std::optional<double> tail_sum(long gamma0) const override;
    bool has_tail_sum() const override;

private:
    std::optional<RadialProfile> profile_;
    std::function<double(long)> f_;
};

/// coeff(gamma, n) = f(p^gamma) g(dist(ball(gamma, n), n0)), where the
/// distance from a ball to a point is 0 if the ball holds the point and the
/// common norm |c - n0|_p over the ball's points c otherwise.
class ProductKernel final : public KernelCoefficients {
public:
    ProductKernel(Prime p, RadialProfile f, NormProfile g, PAdicRational n0);

    const RadialProfile& f() const noexcept { return f_; }
    const NormProfile& g() const noexcept { return g_; }
    const PAdicRational& n0() const noexcept { return n0_; }

    double coeff(long gamma, const FractionalIndex& n) const override;
    std::optional<double> tail_sum(long gamma0) const override;
    bool has_tail_sum() const override;

private:
    RadialProfile f_;
    NormProfile g_;
    PAdicRational n0_;
};

/// Finite sparse table (gamma, n) -> value; zero elsewhere.
class TableKernel final : public KernelCoefficients {
public:
    TableKernel(Prime p, std::map<BallIndex, double> entries);

    const std::map<BallIndex, double>& entries() const noexcept { return entries_; }

    double coeff(long gamma, const FractionalIndex& n) const override;
    std::optional<double> tail_sum(long gamma0) const override;
    bool has_tail_sum() const override { return true; }
    bool finitely_supported() const override { return true; }

private:
    std::map<BallIndex, double> entries_;
};

/// T(x, y) for x != y.
double kernel_eval(const KernelCoefficients& K, const PAdicRational& x, const PAdicRational& y);

/// Checks that T(x, .) is one constant on the sphere |x - y|_p = p^radius_exponent.
bool sphere_constancy_check(const KernelCoefficients& K, const PAdicRational& x, long radius_exponent,
                            int samples, std::uint64_t seed = 0x5eed);

/// Checks T(x, y) == T(y, x) exactly on random pairs.
bool symmetry_check(const KernelCoefficients& K, int samples, std::uint64_t seed = 0x5eed);

/// The pointwise form of the product kernel:
///   f(|x-y|) [ g(|x-n0|) (1 - Omega(|p^g (x - n0)|)) + g(0) Omega(|p^g (x - n0)|) ]
/// with |x - y|_p = p^g.
double example2_closed_form(Prime p, const RadialProfile& f, const NormProfile& g, const PAdicRational& n0,
                            const PAdicRational& x, const PAdicRational& y);

struct ConvergenceDiagnosis {
    enum class Kind { converged, closed_form_tail, diverging, inconclusive };

    Kind kind;
    double tail = 0.0;          // estimate of sum_{gamma >= gamma_probe} p^gamma coeff(gamma, 0)
    double remainder_bound = 0.0;
    long terms = 0;
};

const char* to_string(ConvergenceDiagnosis::Kind kind);

/// Diagnoses sum_{gamma >= gamma_probe} p^gamma coeff(gamma, 0).
ConvergenceDiagnosis convergence_check(const KernelCoefficients& K, long gamma_probe = 0, long max_terms = 4096,
                                       double tol = 1e-12);

/// Sums sum_{gamma >= start} p^gamma coeff(gamma, 0) term by term, ignoring
/// any closed form. Stops once geometric decay has held over four consecutive
/// non-zero terms and the geometric majorant of the remainder is below
/// tol * (offset + partial sum). `terms` reports the number of levels summed.
ConvergenceDiagnosis sum_coefficient_series(const KernelCoefficients& K, long start, long max_terms, double tol,
                                            double offset = 0.0);

}  // namespace padic
