#pragma once

// Eigenvalues of the ultrametric generator T f(x) = int T(x,y) (f(x) - f(y)) dy
// on the wavelets psi_{gamma j n}. They depend on the ball (gamma, n) only:
//
//   lambda = p^gamma T^(gamma, n)
//          + (1 - 1/p) sum_{gamma' > gamma} p^gamma' T^(gamma', frac(p^(gamma'-gamma) n))
//
// The sum runs over the ancestors of the ball. Past depth(n) steps every
// ancestor is centred at 0, so the tail is a series over coeff(., 0).

#include "padic/kernels.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace padic {

/// Raised when the coefficient series fails to converge or cannot be
/// certified without a closed form.
class SeriesError : public std::domain_error {
public:
    SeriesError(const std::string& what, ConvergenceDiagnosis diagnosis)
        : std::domain_error(what), diagnosis_(diagnosis) {}
    const ConvergenceDiagnosis& diagnosis() const noexcept { return diagnosis_; }

private:
    ConvergenceDiagnosis diagnosis_;
};

/// Ancestors (gamma', frac(p^(gamma'-gamma) n)) of a ball for gamma' from
/// gamma + 1 up to, excluding, the stabilization level gamma + depth(n),
/// from which on every ancestor is centred at 0.
struct AncestorChain {
    BallIndex base;
    std::vector<BallIndex> links;
    long stabilization_level;
};

AncestorChain ancestor_chain(long gamma, const FractionalIndex& n);

struct EigenvalueResult {
    double lambda = 0.0;
    double head = 0.0;        // p^gamma T^(gamma, n)
    double chain = 0.0;       // sum over ancestors below the stabilization level
    double tail = 0.0;        // sum over ancestors centred at 0
    double tail_bound = 0.0;  // bound on the dropped remainder; 0 for closed forms
    bool closed_form_tail = false;
    std::optional<long> truncation_level;  // last level summed when truncated
};

inline constexpr double default_tol = 1e-12;

EigenvalueResult eigenvalue(const KernelCoefficients& K, long gamma, const FractionalIndex& n,
                            double tol = default_tol);

/// Eigenvalue of the generator restricted to the ball |x|_p <= p^R.
double eigenvalue_restricted(const KernelCoefficients& K, long gamma, const FractionalIndex& n, long R);

/// Eigenvalue by direct integration of T(p^-gamma n, y) over the spheres of
/// radius p^gamma' around the ball centre, gamma < gamma' <= R_quad, plus the
/// sphere of radius p^gamma itself. Uses pointwise kernel values only.
double eigenvalue_integral(const KernelCoefficients& K, long gamma, const FractionalIndex& n, long R_quad);

/// p^(-gamma alpha) (1 - p^(-alpha-1)) / (1 - p^(-alpha)).
double vladimirov_eigenvalue(Prime p, double alpha, long gamma);

/// Coefficients for leaves of the recurrence, i.e. tabulated balls whose
/// child (gamma - 1, n / p) is absent.
using LeafCoefficient = std::function<double(const BallIndex&)>;

/// Inverts the eigenvalue series by the recurrence
///   T^(gamma, n) = T^(gamma-1, n/p) + p^(1-gamma) (lambda_(gamma, n) - lambda_(gamma-1, n/p)).
/// Leaves take `leaf` (zero by default). Throws std::domain_error on a
/// clearly negative coefficient.
TableKernel recover_coefficients(const std::map<BallIndex, double>& lambda_table, Prime p,
                                 const LeafCoefficient& leaf = {});

}  // namespace padic
