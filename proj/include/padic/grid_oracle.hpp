#pragma once

// Brute-force oracle: the generator on the ball |x|_p <= p^R, discretized on
// p^(R+S) cells of radius p^-S. Functions constant on cells form an invariant
// subspace, and on it the dense matrix below is the exact restricted
// generator; kernel mass outside the ball is dropped. Ordering the cells
// lexicographically by digits (x_-R, ..., x_(S-1)) makes every ball a
// contiguous block, which gives the matrix its hierarchical (Parisi) form.

#include "padic/core.hpp"
#include "padic/kernels.hpp"
#include "padic/wavelets.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic {

inline constexpr std::size_t default_grid_cap = 4096;

class GridSpec {
public:
    GridSpec(Prime p, long R, long S);

    Prime prime() const noexcept { return prime_; }
    long R() const noexcept { return R_; }
    long S() const noexcept { return S_; }
    std::size_t size() const noexcept { return size_; }
    double cell_measure() const { return prime_.real_pow(-static_cast<double>(S_)); }

    /// Representative sum_{i=-R}^{S-1} x_i p^i of cell `index`.
    PAdicRational point(std::size_t index) const;
    std::vector<PAdicRational> points() const;

    /// True if the ball lies inside |x|_p <= p^R and is no smaller than a cell.
    bool represents(const BallIndex& ball) const;
    /// Cell indicator of a representable ball; throws std::invalid_argument otherwise.
    Eigen::VectorXd indicator(const BallIndex& ball) const;
    Eigen::VectorXcd sample(const WaveletIndex& w) const;

private:
    Prime prime_;
    long R_;
    long S_;
    std::size_t size_;
};

class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

struct GridOperator {
    GridSpec spec;
    Eigen::MatrixXd matrix;
};

/// M_ij = -T(x_i, x_j) p^-S for i != j, M_ii = sum_{j != i} T(x_i, x_j) p^-S.
/// Rows are assembled in parallel with a fixed summation order.
GridOperator build_grid(const KernelCoefficients& K, const GridSpec& spec, std::size_t cap = default_grid_cap);

/// Wavelets exactly representable on the grid: 1-S <= gamma <= R with
/// support inside the ball. There are N - 1 of them.
std::vector<WaveletIndex> admissible_indices(const GridSpec& spec);

struct CheckResult {
    std::string name;
    bool pass = true;
    double max_residual = 0.0;
    std::vector<std::string> failures;
};

/// ||M v - lambda_R v|| <= tol ||v|| for every admissible wavelet v, and M 1 = 0.
CheckResult eigencheck(const GridOperator& grid, const KernelCoefficients& K, double tol);

/// Numeric spectrum of M against {0} and lambda_R(gamma, n) with multiplicity
/// p - 1, matched after sorting within tol * max(1, spectral radius).
CheckResult spectrum_check(const GridOperator& grid, const KernelCoefficients& K, double tol);

/// M == M^T entrywise, exactly.
CheckResult matrix_symmetry_check(const GridOperator& grid);
/// |row sum| <= tol * ||row||_1.
CheckResult row_sum_check(const GridOperator& grid, double tol = 1e-12);

/// exp(-tM) through the eigendecomposition of the symmetric matrix M.
class GridPropagator {
public:
    explicit GridPropagator(const GridOperator& grid);

    Eigen::MatrixXd propagator(double t) const;
    /// <1_a, exp(-tM) 1_b> with cell measure p^-S.
    double pairing(double t, const BallIndex& a, const BallIndex& b) const;
    const Eigen::VectorXd& eigenvalues() const noexcept { return values_; }

private:
    GridSpec spec_;
    Eigen::MatrixXd vectors_;
    Eigen::VectorXd values_;
};

double grid_expm_survival(const GridOperator& grid, double t, const BallIndex& a, const BallIndex& b);

/// Entries of exp(-tM) >= -tol for each t.
CheckResult positivity_check(const GridPropagator& prop, const std::vector<double>& times, double tol = 1e-12);
/// exp(-tM) preserves sum_i f_i: every column sums to 1 within tol.
CheckResult conservation_check(const GridPropagator& prop, const std::vector<double>& times, double tol = 1e-10);

struct VerificationReport {
    GridSpec spec;
    double tol;
    std::vector<CheckResult> checks;

    bool pass() const;
};

/// Runs the symmetry, sphere-constancy, row-sum, eigencheck, spectrum,
/// positivity and conservation checks for K on the grid.
VerificationReport verify_grid(const KernelCoefficients& K, const GridSpec& spec, double tol,
                               std::size_t cap = default_grid_cap);

/// JSON report: {"p", "R", "S", "N", "tol", "pass", "checks": [{"name", "pass", "max_residual", "failures"}]}.
void write_report_json(std::ostream& out, const VerificationReport& report);

struct SpectrumRow {
    double lambda;
    std::size_t multiplicity;
    std::optional<BallIndex> ball;  // empty for the constant mode
};

/// lambda_R for every admissible (gamma, n), plus the constant mode, sorted
/// by descending lambda.
std::vector<SpectrumRow> restricted_spectrum(const KernelCoefficients& K, const GridSpec& spec);

/// Header `lambda,multiplicity,gamma,n_numerator,n_depth`; the constant mode
/// leaves the last three fields empty.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows);

}  // namespace padic
