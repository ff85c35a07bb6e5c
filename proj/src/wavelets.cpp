#include "padic/wavelets.hpp"

#include <stdexcept>
#include <string>

namespace padic {

WaveletIndex::WaveletIndex(long gamma, unsigned long j, FractionalIndex n)
    : gamma_(gamma), j_(j), n_(std::move(n)) {
    if (j_ < 1 || j_ >= n_.prime().value())
        throw std::invalid_argument("wavelet index j must lie in [1, p-1], got " + std::to_string(j_));
}

Support support(const WaveletIndex& w) { return {w.n().to_rational().scaled(-w.gamma()), w.gamma()}; }

std::optional<RootOfUnity> wavelet_phase(const WaveletIndex& w, const PAdicRational& x) {
    require_same_prime(w.prime(), x.prime());
    if (!in_ball(x, w.gamma(), w.n())) return std::nullopt;
    const PAdicRational jx = x * PAdicRational(x.prime(), static_cast<long>(w.j()));
    return character_phase(jx.scaled(w.gamma() - 1));
}

std::complex<double> wavelet_eval(const WaveletIndex& w, const PAdicRational& x) {
    auto phase = wavelet_phase(w, x);
    if (!phase) return {0.0, 0.0};
    return w.prime().real_pow(-0.5 * static_cast<double>(w.gamma())) * phase->to_complex();
}

RootOfUnity shift_phase_exact(const WaveletIndex& w, unsigned long l) {
    const Prime p = w.prime();
    if (l >= p.value()) throw std::invalid_argument("shift digit must lie in [0, p-1]");
    return RootOfUnity(FractionalIndex::make(p, mpz_class(w.j()) * l, 1));
}

std::complex<double> shift_phase(const WaveletIndex& w, unsigned long l) { return shift_phase_exact(w, l).to_complex(); }

WaveletExpansion indicator_expansion(long gamma, const FractionalIndex& n, long gamma_max) {
    if (gamma_max <= gamma)
        throw std::invalid_argument("indicator_expansion: gamma_max must exceed gamma");
    const Prime p = n.prime();
    WaveletExpansion out{p, {}, std::nullopt};
    out.terms.reserve(static_cast<std::size_t>(gamma_max - gamma) * (p.value() - 1));
    const PAdicRational centre = n.to_rational();
    for (long g = gamma + 1; g <= gamma_max; ++g) {
        const FractionalIndex parent = n.shifted(g - gamma);
        // psi is constant on the ball; the coefficient is the ball measure
        // times conj(psi) at the centre.
        const double magnitude = p.real_pow(static_cast<double>(gamma) - 0.5 * static_cast<double>(g));
        const PAdicRational base = centre.scaled(g - gamma - 1);
        for (unsigned long j = 1; j < p.value(); ++j) {
            const PAdicRational arg = base * PAdicRational(p, static_cast<long>(j));
            out.terms.push_back({WaveletIndex(g, j, parent), magnitude, character_phase(arg).conj()});
        }
    }
    out.residual = ResidualBall{{gamma_max, n.shifted(gamma_max - gamma)},
                                p.real_pow(static_cast<double>(gamma - gamma_max))};
    return out;
}

std::complex<double> grid_inner_product(std::span<const std::complex<double>> f,
                                        std::span<const std::complex<double>> g, double cell_measure) {
    if (f.size() != g.size()) throw std::invalid_argument("grid_inner_product: length mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]);
    return acc * cell_measure;
}

}  // namespace padic
