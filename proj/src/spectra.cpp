#include "padic/spectra.hpp"

#include <cmath>
#include <string>

namespace padic {

namespace {

constexpr long max_series_terms = 4096;

double pow_p(Prime p, long e) { return p.real_pow(static_cast<double>(e)); }

}  // namespace

AncestorChain ancestor_chain(long gamma, const FractionalIndex& n) {
    AncestorChain out{{gamma, n}, {}, gamma + n.depth()};
    for (long g = gamma + 1; g < out.stabilization_level; ++g) out.links.push_back({g, n.shifted(g - gamma)});
    return out;
}

EigenvalueResult eigenvalue(const KernelCoefficients& K, long gamma, const FractionalIndex& n, double tol) {
    require_same_prime(K.prime(), n.prime());
    if (!(tol > 0.0)) throw std::invalid_argument("eigenvalue: tol must be positive");
    const Prime p = K.prime();
    const double c = 1.0 - 1.0 / static_cast<double>(p.value());

    EigenvalueResult r;
    r.head = pow_p(p, gamma) * K.coeff(gamma, n);
    const AncestorChain chain = ancestor_chain(gamma, n);
    for (const BallIndex& link : chain.links) r.chain += pow_p(p, link.gamma) * K.coeff(link.gamma, link.n);

    const long tail_start = std::max(gamma + 1, chain.stabilization_level);
    std::optional<double> closed = K.has_tail_sum() ? K.tail_sum(tail_start - 1) : std::nullopt;
    if (closed) {
        r.tail = *closed;
        r.closed_form_tail = true;
    } else {
        const ConvergenceDiagnosis d = sum_coefficient_series(K, tail_start, max_series_terms, tol, r.head / c + r.chain);
        using Kind = ConvergenceDiagnosis::Kind;
        if (d.kind == Kind::diverging)
            throw SeriesError("coefficient series sum_{gamma >= 0} p^gamma T^(gamma, 0) diverges", d);
        if (d.kind == Kind::inconclusive)
            throw SeriesError("coefficient series sum_{gamma >= 0} p^gamma T^(gamma, 0) shows no certified decay "
                              "within " + std::to_string(max_series_terms) + " levels and the kernel has no closed-form tail",
                              d);
        r.tail = d.tail;
        r.tail_bound = c * d.remainder_bound;
        r.truncation_level = tail_start + d.terms - 1;
    }
    r.lambda = r.head + c * (r.chain + r.tail);
    return r;
}

double eigenvalue_restricted(const KernelCoefficients& K, long gamma, const FractionalIndex& n, long R) {
    require_same_prime(K.prime(), n.prime());
    if (gamma > R) throw std::invalid_argument("eigenvalue_restricted: gamma exceeds R");
    const Prime p = K.prime();
    double sum = 0.0;
    for (long g = gamma + 1; g <= R; ++g) sum += pow_p(p, g) * K.coeff(g, n.shifted(g - gamma));
    return pow_p(p, gamma) * K.coeff(gamma, n) + (1.0 - 1.0 / static_cast<double>(p.value())) * sum;
}

double eigenvalue_integral(const KernelCoefficients& K, long gamma, const FractionalIndex& n, long R_quad) {
    require_same_prime(K.prime(), n.prime());
    if (R_quad <= gamma) throw std::invalid_argument("eigenvalue_integral: R_quad must exceed gamma");
    const Prime p = K.prime();
    const PAdicRational centre = n.to_rational().scaled(-gamma);
    const double sphere_fraction = 1.0 - 1.0 / static_cast<double>(p.value());

    double outer = 0.0;
    for (long g = gamma + 1; g <= R_quad; ++g) {
        const PAdicRational on_sphere = centre + PAdicRational(p, 1).scaled(-g);
        outer += pow_p(p, g) * sphere_fraction * kernel_eval(K, centre, on_sphere);
    }
    const PAdicRational neighbour = (n.to_rational() + PAdicRational(p, 1)).scaled(-gamma);
    return outer + pow_p(p, gamma) * kernel_eval(K, centre, neighbour);
}

double vladimirov_eigenvalue(Prime p, double alpha, long gamma) {
    if (!(alpha > 0.0)) throw std::domain_error("vladimirov_eigenvalue requires alpha > 0");
    return p.real_pow(-static_cast<double>(gamma) * alpha) * (1.0 - p.real_pow(-alpha - 1.0)) /
           (1.0 - p.real_pow(-alpha));
}

TableKernel recover_coefficients(const std::map<BallIndex, double>& lambda_table, Prime p, const LeafCoefficient& leaf) {
    std::map<BallIndex, double> recovered;
    // ascending gamma: every child precedes its parent
    for (const auto& [ball, lambda] : lambda_table) {
        require_same_prime(p, ball.n.prime());
        const BallIndex child{ball.gamma - 1, ball.n.divided_by_p()};
        double value;
        if (auto it = lambda_table.find(child); it != lambda_table.end()) {
            const double child_coeff = recovered.at(child);
            const double step = pow_p(p, 1 - ball.gamma) * (lambda - it->second);
            value = child_coeff + step;
            const double scale =
                std::max({std::abs(child_coeff), pow_p(p, 1 - ball.gamma) * std::max(std::abs(lambda), std::abs(it->second))});
            if (value < -1e-12 * scale)
                throw std::domain_error("recover_coefficients: negative coefficient at gamma=" +
                                        std::to_string(ball.gamma) + ", n=" + ball.n.to_string() +
                                        "; the eigenvalues are not realizable by an admissible kernel");
            value = std::max(value, 0.0);
        } else {
            value = leaf ? leaf(ball) : 0.0;
        }
        recovered.emplace(ball, value);
    }
    std::erase_if(recovered, [](const auto& kv) { return kv.second == 0.0; });
    return TableKernel(p, std::move(recovered));
}

}  // namespace padic
