#include "padic/kernels.hpp"

#include "padic/random.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace padic {

std::optional<double> KernelCoefficients::tail_sum(long) const { return std::nullopt; }

double KernelCoefficients::evaluate_pair(const PAdicRational& x, const PAdicRational& y) const {
    const SeparationScale s = separation_scale(x, y);
    return coeff(s.gamma, s.n);
}

double kernel_eval(const KernelCoefficients& K, const PAdicRational& x, const PAdicRational& y) {
    require_same_prime(K.prime(), x.prime());
    require_same_prime(K.prime(), y.prime());
    if (x == y) throw std::invalid_argument("kernel_eval: the kernel diagonal x == y is not defined");
    return K.evaluate_pair(x, y);
}

// ---------------------------------------------------------------------------
// Profiles

RadialProfile::RadialProfile(std::map<long, double> table, std::optional<double> alpha)
    : table_(std::move(table)), alpha_(alpha) {
    for (const auto& [gamma, value] : table_)
        if (!(value >= 0.0) || !std::isfinite(value))
            throw std::invalid_argument("radial profile values must be finite and non-negative");
}

double RadialProfile::operator()(Prime p, long gamma) const {
    if (auto it = table_.find(gamma); it != table_.end()) return it->second;
    if (alpha_) return p.real_pow(-static_cast<double>(gamma) * (1.0 + *alpha_));
    return 0.0;
}

std::optional<double> RadialProfile::weighted_tail(Prime p, long gamma0) const {
    double sum = 0.0;
    if (alpha_) {
        if (*alpha_ <= 0.0) return std::nullopt;
        const double r = p.real_pow(-*alpha_);
        sum = p.real_pow(-static_cast<double>(gamma0 + 1) * *alpha_) / (1.0 - r);
    }
    for (auto it = table_.upper_bound(gamma0); it != table_.end(); ++it) {
        const double weight = p.real_pow(static_cast<double>(it->first));
        sum += weight * it->second;
        if (alpha_) sum -= weight * p.real_pow(-static_cast<double>(it->first) * (1.0 + *alpha_));
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Built-in kernels

RadialPowerKernel::RadialPowerKernel(Prime p, double alpha) : KernelCoefficients(p), alpha_(alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("RadialPowerKernel requires alpha > 0");
}

double RadialPowerKernel::coeff(long gamma, const FractionalIndex&) const {
    return prime().real_pow(-static_cast<double>(gamma) * (1.0 + alpha_));
}

std::optional<double> RadialPowerKernel::tail_sum(long gamma0) const {
    const double r = prime().real_pow(-alpha_);
    return prime().real_pow(-static_cast<double>(gamma0 + 1) * alpha_) / (1.0 - r);
}

RadialKernel::RadialKernel(Prime p, RadialProfile f) : KernelCoefficients(p), profile_(std::move(f)) {}

RadialKernel::RadialKernel(Prime p, std::function<double(long)> f) : KernelCoefficients(p), f_(std::move(f)) {
    if (!f_) throw std::invalid_argument("RadialKernel: empty function");
}

double RadialKernel::coeff(long gamma, const FractionalIndex&) const {
    return profile_ ? (*profile_)(prime(), gamma) : f_(gamma);
}

std::optional<double> RadialKernel::tail_sum(long gamma0) const {
    if (!profile_) return std::nullopt;
    return profile_->weighted_tail(prime(), gamma0);
}

bool RadialKernel::has_tail_sum() const { return profile_ && (!profile_->alpha() || *profile_->alpha() > 0.0); }

ProductKernel::ProductKernel(Prime p, RadialProfile f, NormProfile g, PAdicRational n0)
    : KernelCoefficients(p), f_(std::move(f)), g_(std::move(g)), n0_(std::move(n0)) {
    require_same_prime(p, n0_.prime());
    if (!(g_.at_zero >= 0.0)) throw std::invalid_argument("ProductKernel: g(0) must be non-negative");
    for (const auto& [e, v] : g_.table)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("ProductKernel: g must be non-negative");
}

double ProductKernel::coeff(long gamma, const FractionalIndex& n) const {
    const double fv = f_(prime(), gamma);
    if (fv == 0.0) return 0.0;
    const PAdicRational d = n.to_rational().scaled(-gamma) - n0_;
    const Valuation v = valuation(d);
    if (v.is_infinite() || -v.value() <= gamma) return fv * g_.at_zero;
    return fv * g_.at_exponent(-v.value());
}

std::optional<double> ProductKernel::tail_sum(long gamma0) const {
    const Valuation v = valuation(n0_);
    if (v.is_infinite()) {
        auto tail = f_.weighted_tail(prime(), gamma0);
        if (!tail) return std::nullopt;
        return g_.at_zero * *tail;
    }
    // balls around 0 of radius below |n0| see g(|n0|), the rest hold n0
    const long e0 = -v.value();
    double sum = 0.0;
    const double g_far = g_.at_exponent(e0);
    if (g_far != 0.0)
        for (long g = gamma0 + 1; g < e0; ++g) sum += prime().real_pow(static_cast<double>(g)) * f_(prime(), g);
    sum *= g_far;
    auto tail = f_.weighted_tail(prime(), std::max(gamma0, e0 - 1));
    if (!tail) return std::nullopt;
    return sum + g_.at_zero * *tail;
}

bool ProductKernel::has_tail_sum() const { return !f_.alpha() || *f_.alpha() > 0.0; }

TableKernel::TableKernel(Prime p, std::map<BallIndex, double> entries) : KernelCoefficients(p), entries_(std::move(entries)) {
    for (const auto& [ball, value] : entries_) {
        require_same_prime(p, ball.n.prime());
        if (!(value >= 0.0) || !std::isfinite(value))
            throw std::invalid_argument("TableKernel: coefficients must be finite and non-negative");
    }
}

double TableKernel::coeff(long gamma, const FractionalIndex& n) const {
    auto it = entries_.find(BallIndex{gamma, n});
    return it == entries_.end() ? 0.0 : it->second;
}

std::optional<double> TableKernel::tail_sum(long gamma0) const {
    double sum = 0.0;
    for (const auto& [ball, value] : entries_)
        if (ball.gamma > gamma0 && ball.n.is_zero()) sum += prime().real_pow(static_cast<double>(ball.gamma)) * value;
    return sum;
}

// ---------------------------------------------------------------------------
// Structural checks

bool sphere_constancy_check(const KernelCoefficients& K, const PAdicRational& x, long radius_exponent, int samples,
                            std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("sphere_constancy_check needs at least 2 samples");
    std::mt19937_64 rng(seed);
    const double first = kernel_eval(K, x, random_on_sphere(x, radius_exponent, rng));
    for (int i = 1; i < samples; ++i)
        if (kernel_eval(K, x, random_on_sphere(x, radius_exponent, rng)) != first) return false;
    return true;
}

bool symmetry_check(const KernelCoefficients& K, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> radius(-6, 6);
    for (int i = 0; i < samples; ++i) {
        const PAdicRational x = random_point(K.prime(), rng);
        // alternate far pairs and close pairs so small spheres are exercised
        PAdicRational y = (i % 2 == 0) ? random_point(K.prime(), rng) : random_on_sphere(x, radius(rng), rng);
        if (x == y) continue;
        if (kernel_eval(K, x, y) != kernel_eval(K, y, x)) return false;
    }
    return true;
}

double example2_closed_form(Prime p, const RadialProfile& f, const NormProfile& g, const PAdicRational& n0,
                            const PAdicRational& x, const PAdicRational& y) {
    const long gamma = separation_scale(x, y).gamma;
    const Valuation v = valuation(x - n0);
    const bool n0_in_ball = v.is_infinite() || -v.value() <= gamma;
    return f(p, gamma) * (n0_in_ball ? g.at_zero : g.at_exponent(-v.value()));
}

// ---------------------------------------------------------------------------
// Convergence

const char* to_string(ConvergenceDiagnosis::Kind kind) {
    switch (kind) {
        case ConvergenceDiagnosis::Kind::converged: return "converged";
        case ConvergenceDiagnosis::Kind::closed_form_tail: return "closed-form tail";
        case ConvergenceDiagnosis::Kind::diverging: return "diverging";
        case ConvergenceDiagnosis::Kind::inconclusive: return "inconclusive";
    }
    return "?";
}

ConvergenceDiagnosis sum_coefficient_series(const KernelCoefficients& K, long start, long max_terms, double tol,
                                            double offset) {
    using Kind = ConvergenceDiagnosis::Kind;
    if (max_terms < 2) throw std::invalid_argument("convergence needs max_terms >= 2");
    constexpr std::size_t window = 4;
    const Prime p = K.prime();
    const FractionalIndex zero = FractionalIndex::zero(p);

    double sum = 0.0;
    std::deque<std::pair<long, double>> recent;  // last window+1 non-zero terms
    std::deque<double> ratios;
    for (long i = 0; i < max_terms; ++i) {
        const long g = start + i;
        const double term = p.real_pow(static_cast<double>(g)) * K.coeff(g, zero);
        if (!std::isfinite(term)) return {Kind::diverging, sum, INFINITY, i + 1};
        sum += term;
        if (sum > 1.0 / tol) return {Kind::diverging, sum, INFINITY, i + 1};
        if (term <= 0.0) continue;
        if (!recent.empty()) {
            const auto [prev_level, prev_term] = recent.back();
            ratios.push_back(std::pow(term / prev_term, 1.0 / static_cast<double>(g - prev_level)));
            if (ratios.size() > window) ratios.pop_front();
        }
        recent.emplace_back(g, term);
        if (recent.size() > window + 1) recent.pop_front();
        if (ratios.size() == window) {
            const double rmax = *std::max_element(ratios.begin(), ratios.end());
            if (rmax < 1.0) {
                const double bound = term * rmax / (1.0 - rmax);
                if (bound <= tol * (offset + sum)) return {Kind::converged, sum, bound, i + 1};
            }
        }
    }
    if (ratios.size() == window && std::all_of(ratios.begin(), ratios.end(), [](double r) { return r >= 1.0; }))
        return {Kind::diverging, sum, INFINITY, max_terms};
    return {Kind::inconclusive, sum, INFINITY, max_terms};
}

ConvergenceDiagnosis convergence_check(const KernelCoefficients& K, long gamma_probe, long max_terms, double tol) {
    if (max_terms < 2) throw std::invalid_argument("convergence_check needs max_terms >= 2");
    if (K.has_tail_sum()) {
        if (auto tail = K.tail_sum(gamma_probe - 1)) {
            const auto kind = K.finitely_supported() ? ConvergenceDiagnosis::Kind::converged
                                                     : ConvergenceDiagnosis::Kind::closed_form_tail;
            return {kind, *tail, 0.0, 0};
        }
    }
    return sum_coefficient_series(K, gamma_probe, max_terms, tol);
}

}  // namespace padic
