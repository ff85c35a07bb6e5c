#pragma once

#include "padic/core.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace padic {

/// psi_{gamma j n}(x) = p^(-gamma/2) chi(p^(gamma-1) j x) Omega(|p^gamma x - n|_p).
class WaveletIndex {
public:
    WaveletIndex(long gamma, unsigned long j, FractionalIndex n);

    long gamma() const noexcept { return gamma_; }
    unsigned long j() const noexcept { return j_; }
    const FractionalIndex& n() const noexcept { return n_; }
    Prime prime() const noexcept { return n_.prime(); }
    BallIndex ball() const { return {gamma_, n_}; }

    friend bool operator==(const WaveletIndex&, const WaveletIndex&) = default;
    friend bool operator<(const WaveletIndex& a, const WaveletIndex& b) {
        if (a.gamma_ != b.gamma_) return a.gamma_ < b.gamma_;
        if (!(a.n_ == b.n_)) return a.n_ < b.n_;
        return a.j_ < b.j_;
    }

private:
    long gamma_;
    unsigned long j_;
    FractionalIndex n_;
};

struct Support {
    PAdicRational center;
    long radius_exponent;
};

Support support(const WaveletIndex& w);

/// Exact phase of psi_w(x), or nullopt outside the support.
std::optional<RootOfUnity> wavelet_phase(const WaveletIndex& w, const PAdicRational& x);
std::complex<double> wavelet_eval(const WaveletIndex& w, const PAdicRational& x);

/// chi(j l / p): psi_w(x + p^-gamma l) = shift_phase(w, l) * psi_w(x).
RootOfUnity shift_phase_exact(const WaveletIndex& w, unsigned long l);
std::complex<double> shift_phase(const WaveletIndex& w, unsigned long l);

struct WaveletTerm {
    WaveletIndex index;
    double magnitude;
    RootOfUnity phase;

    std::complex<double> coefficient() const { return magnitude * phase.to_complex(); }
};

/// What a truncated expansion leaves out: the constant `value` on `ball`.
struct ResidualBall {
    BallIndex ball;
    double value;
};

struct WaveletExpansion {
    Prime prime;
    std::vector<WaveletTerm> terms;
    std::optional<ResidualBall> residual;
};

/// Wavelet coefficients <Omega(|p^gamma x - n|_p), psi> for all scales
/// gamma < gamma' <= gamma_max. The indicator equals the returned terms plus
/// the residual constant p^(gamma - gamma_max) on the enclosing ball of radius
/// p^gamma_max.
WaveletExpansion indicator_expansion(long gamma, const FractionalIndex& n, long gamma_max);

/// sum_i f_i conj(g_i) * cell_measure.
std::complex<double> grid_inner_product(std::span<const std::complex<double>> f,
                                        std::span<const std::complex<double>> g, double cell_measure);

}  // namespace padic
