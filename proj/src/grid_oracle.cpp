#include "padic/grid_oracle.hpp"

#include "padic/concurrency.hpp"
#include "padic/format.hpp"
#include "padic/spectra.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace padic {

GridSpec::GridSpec(Prime p, long R, long S) : prime_(p), R_(R), S_(S), size_(0) {
    if (R < 0 || S < 0) throw std::invalid_argument("grid exponents R and S must be non-negative");
    const mpz_class n = p.pow(static_cast<unsigned long>(R + S));
    if (n > mpz_class(1UL << 40)) throw CapacityError("grid with " + n.get_str() + " cells is too large");
    size_ = n.get_ui();
}

PAdicRational GridSpec::point(std::size_t index) const {
    if (index >= size_) throw std::out_of_range("grid cell index out of range");
    // the most significant digit of the index is x_-R, the least x_(S-1)
    const unsigned long p = prime_.value();
    const long digits = R_ + S_;
    unsigned long m = 0;
    unsigned long weight = 1;
    std::vector<unsigned long> d(static_cast<std::size_t>(digits));
    for (long pos = digits - 1; pos >= 0; --pos) {
        d[static_cast<std::size_t>(pos)] = index % p;
        index /= p;
    }
    for (long k = 0; k < digits; ++k) {
        m += d[static_cast<std::size_t>(k)] * weight;
        weight *= p;
    }
    return PAdicRational(prime_, mpz_class(m), R_);
}

std::vector<PAdicRational> GridSpec::points() const {
    std::vector<PAdicRational> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(point(i));
    return out;
}

bool GridSpec::represents(const BallIndex& ball) const {
    require_same_prime(prime_, ball.n.prime());
    return ball.gamma >= -S_ && ball.gamma <= R_ && ball.n.depth() <= R_ - ball.gamma;
}

Eigen::VectorXd GridSpec::indicator(const BallIndex& ball) const {
    if (!represents(ball))
        throw std::invalid_argument("ball (" + std::to_string(ball.gamma) + ", " + ball.n.to_string() +
                                    ") is not representable on the grid");
    Eigen::VectorXd v(static_cast<Eigen::Index>(size_));
    for (std::size_t i = 0; i < size_; ++i)
        v(static_cast<Eigen::Index>(i)) = in_ball(point(i), ball.gamma, ball.n) ? 1.0 : 0.0;
    return v;
}

Eigen::VectorXcd GridSpec::sample(const WaveletIndex& w) const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(size_));
    for (std::size_t i = 0; i < size_; ++i) v(static_cast<Eigen::Index>(i)) = wavelet_eval(w, point(i));
    return v;
}

GridOperator build_grid(const KernelCoefficients& K, const GridSpec& spec, std::size_t cap) {
    require_same_prime(K.prime(), spec.prime());
    const std::size_t n = spec.size();
    if (n > cap)
        throw CapacityError("grid has " + std::to_string(n) + " cells, above the cap of " + std::to_string(cap));
    const std::vector<PAdicRational> x = spec.points();
    const double cell = spec.cell_measure();
    GridOperator grid{spec, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
    parallel_for(n, [&](std::size_t i) {
        const auto r = static_cast<Eigen::Index>(i);
        double diagonal = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double v = kernel_eval(K, x[i], x[j]) * cell;
            grid.matrix(r, static_cast<Eigen::Index>(j)) = -v;
            diagonal += v;
        }
        grid.matrix(r, r) = diagonal;
    });
    return grid;
}

std::vector<WaveletIndex> admissible_indices(const GridSpec& spec) {
    const Prime p = spec.prime();
    std::vector<WaveletIndex> out;
    for (long gamma = 1 - spec.S(); gamma <= spec.R(); ++gamma) {
        const long depth = spec.R() - gamma;
        const unsigned long count = p.pow(static_cast<unsigned long>(depth)).get_ui();
        for (unsigned long m = 0; m < count; ++m) {
            const FractionalIndex n = FractionalIndex::make(p, mpz_class(m), depth);
            for (unsigned long j = 1; j < p.value(); ++j) out.emplace_back(gamma, j, n);
        }
    }
    return out;
}

namespace {

std::string describe(const BallIndex& ball) {
    return "(gamma=" + std::to_string(ball.gamma) + ", n=" + ball.n.to_string() + ")";
}

}  // namespace

CheckResult eigencheck(const GridOperator& grid, const KernelCoefficients& K, double tol) {
    CheckResult out{"eigencheck", true, 0.0, {}};
    const Eigen::MatrixXcd M = grid.matrix.cast<std::complex<double>>();
    const std::vector<WaveletIndex> indices = admissible_indices(grid.spec);
    std::vector<double> residuals(indices.size());
    parallel_for(indices.size(), [&](std::size_t k) {
        const WaveletIndex& w = indices[k];
        const Eigen::VectorXcd v = grid.spec.sample(w);
        const double lambda = eigenvalue_restricted(K, w.gamma(), w.n(), grid.spec.R());
        residuals[k] = (M * v - lambda * v).norm() / v.norm();
    });
    for (std::size_t k = 0; k < indices.size(); ++k) {
        out.max_residual = std::max(out.max_residual, residuals[k]);
        if (!(residuals[k] <= tol)) {
            out.pass = false;
            std::ostringstream msg;
            msg << "wavelet " << describe(indices[k].ball()) << " j=" << indices[k].j()
                << " residual " << format_double(residuals[k]);
            out.failures.push_back(msg.str());
        }
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.matrix.rows());
    const double constant_residual = (grid.matrix * ones).norm() / ones.norm();
    out.max_residual = std::max(out.max_residual, constant_residual);
    if (!(constant_residual <= tol)) {
        out.pass = false;
        out.failures.push_back("constant mode residual " + format_double(constant_residual));
    }
    return out;
}

CheckResult spectrum_check(const GridOperator& grid, const KernelCoefficients& K, double tol) {
    CheckResult out{"spectrum", true, 0.0, {}};
    std::vector<double> expected{0.0};
    for (const SpectrumRow& row : restricted_spectrum(K, grid.spec))
        if (row.ball) expected.insert(expected.end(), row.multiplicity, row.lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(grid.matrix, Eigen::EigenvaluesOnly);
    std::vector<double> numeric(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    if (numeric.size() != expected.size()) {
        out.pass = false;
        out.failures.push_back("multiset sizes differ: " + std::to_string(numeric.size()) + " vs " +
                               std::to_string(expected.size()));
        return out;
    }
    std::sort(expected.begin(), expected.end());
    std::sort(numeric.begin(), numeric.end());
    double radius = 1.0;
    for (double v : expected) radius = std::max(radius, std::abs(v));
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const double diff = std::abs(numeric[i] - expected[i]);
        out.max_residual = std::max(out.max_residual, diff / radius);
        if (!(diff <= tol * radius)) {
            out.pass = false;
            out.failures.push_back("eigenvalue #" + std::to_string(i) + ": numeric " + format_double(numeric[i]) +
                                   " vs expected " + format_double(expected[i]));
        }
    }
    return out;
}

CheckResult matrix_symmetry_check(const GridOperator& grid) {
    CheckResult out{"symmetry", true, 0.0, {}};
    const Eigen::MatrixXd& M = grid.matrix;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = i + 1; j < M.cols(); ++j)
            if (M(i, j) != M(j, i)) {
                out.pass = false;
                out.max_residual = std::max(out.max_residual, std::abs(M(i, j) - M(j, i)));
                if (out.failures.size() < 10)
                    out.failures.push_back("M(" + std::to_string(i) + "," + std::to_string(j) + ") != M(" +
                                           std::to_string(j) + "," + std::to_string(i) + ")");
            }
    return out;
}

CheckResult row_sum_check(const GridOperator& grid, double tol) {
    CheckResult out{"row_sums", true, 0.0, {}};
    const Eigen::MatrixXd& M = grid.matrix;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        const double sum = std::abs(M.row(i).sum());
        const double scale = M.row(i).cwiseAbs().sum();
        const double rel = scale > 0.0 ? sum / scale : sum;
        out.max_residual = std::max(out.max_residual, rel);
        if (!(sum <= tol * scale)) {
            out.pass = false;
            out.failures.push_back("row " + std::to_string(i) + " sums to " + format_double(M.row(i).sum()));
        }
    }
    return out;
}

GridPropagator::GridPropagator(const GridOperator& grid) : spec_(grid.spec) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(grid.matrix);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition of the grid operator failed");
    vectors_ = solver.eigenvectors();
    values_ = solver.eigenvalues();
}

Eigen::MatrixXd GridPropagator::propagator(double t) const {
    const Eigen::VectorXd decay = (-t * values_).array().exp();
    return vectors_ * decay.asDiagonal() * vectors_.transpose();
}

double GridPropagator::pairing(double t, const BallIndex& a, const BallIndex& b) const {
    const Eigen::VectorXd fa = vectors_.transpose() * spec_.indicator(a);
    const Eigen::VectorXd fb = vectors_.transpose() * spec_.indicator(b);
    const Eigen::VectorXd decay = (-t * values_).array().exp();
    return spec_.cell_measure() * (fa.array() * decay.array() * fb.array()).sum();
}

double grid_expm_survival(const GridOperator& grid, double t, const BallIndex& a, const BallIndex& b) {
    return GridPropagator(grid).pairing(t, a, b);
}

CheckResult positivity_check(const GridPropagator& prop, const std::vector<double>& times, double tol) {
    CheckResult out{"positivity", true, 0.0, {}};
    for (double t : times) {
        const double lowest = prop.propagator(t).minCoeff();
        out.max_residual = std::max(out.max_residual, std::max(0.0, -lowest));
        if (!(lowest >= -tol)) {
            out.pass = false;
            out.failures.push_back("t=" + format_double(t) + ": min entry " + format_double(lowest));
        }
    }
    return out;
}

CheckResult conservation_check(const GridPropagator& prop, const std::vector<double>& times, double tol) {
    CheckResult out{"conservation", true, 0.0, {}};
    for (double t : times) {
        const Eigen::RowVectorXd sums = prop.propagator(t).colwise().sum();
        const double worst = (sums.array() - 1.0).abs().maxCoeff();
        out.max_residual = std::max(out.max_residual, worst);
        if (!(worst <= tol)) {
            out.pass = false;
            out.failures.push_back("t=" + format_double(t) + ": column sum deviates by " + format_double(worst));
        }
    }
    return out;
}

std::vector<SpectrumRow> restricted_spectrum(const KernelCoefficients& K, const GridSpec& spec) {
    require_same_prime(K.prime(), spec.prime());
    const Prime p = spec.prime();
    std::vector<SpectrumRow> rows;
    for (long gamma = 1 - spec.S(); gamma <= spec.R(); ++gamma) {
        const long depth = spec.R() - gamma;
        const unsigned long count = p.pow(static_cast<unsigned long>(depth)).get_ui();
        for (unsigned long m = 0; m < count; ++m) {
            BallIndex ball{gamma, FractionalIndex::make(p, mpz_class(m), depth)};
            const double lambda = eigenvalue_restricted(K, ball.gamma, ball.n, spec.R());
            rows.push_back({lambda, p.value() - 1, std::move(ball)});
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
        if (a.lambda != b.lambda) return a.lambda > b.lambda;
        return *a.ball < *b.ball;
    });
    rows.push_back({0.0, 1, std::nullopt});
    return rows;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows) {
    out << "lambda,multiplicity,gamma,n_numerator,n_depth\n";
    for (const SpectrumRow& row : rows) {
        out << format_double(row.lambda) << ',' << row.multiplicity << ',';
        if (row.ball) out << row.ball->gamma << ',' << row.ball->n.numerator().get_str() << ',' << row.ball->n.depth();
        else out << ",,";
        out << '\n';
    }
}

bool VerificationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VerificationReport verify_grid(const KernelCoefficients& K, const GridSpec& spec, double tol, std::size_t cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("verify_grid: tol must be positive");
    const GridOperator grid = build_grid(K, spec, cap);
    VerificationReport report{spec, tol, {}};

    CheckResult symmetry = matrix_symmetry_check(grid);
    if (!symmetry_check(K, 256)) {
        symmetry.pass = false;
        symmetry.failures.push_back("T(x, y) != T(y, x) on random point pairs");
    }
    report.checks.push_back(std::move(symmetry));

    CheckResult sphere{"sphere_constancy", true, 0.0, {}};
    const std::size_t stride = std::max<std::size_t>(1, spec.size() / 32);
    for (std::size_t i = 0; i < spec.size(); i += stride) {
        const PAdicRational x = spec.point(i);
        for (long e = 1 - spec.S(); e <= spec.R() + 1; ++e) {
            if (!sphere_constancy_check(K, x, e, 8, 0x5eed + i)) {
                sphere.pass = false;
                sphere.failures.push_back("x=" + x.to_string() + " radius p^" + std::to_string(e));
            }
        }
    }
    report.checks.push_back(std::move(sphere));

    report.checks.push_back(row_sum_check(grid));
    report.checks.push_back(eigencheck(grid, K, tol));
    report.checks.push_back(spectrum_check(grid, K, tol));
    const GridPropagator prop(grid);
    const std::vector<double> times{0.1, 1.0, 10.0};
    report.checks.push_back(positivity_check(prop, times));
    report.checks.push_back(conservation_check(prop, times));
    return report;
}

void write_report_json(std::ostream& out, const VerificationReport& report) {
    nlohmann::ordered_json doc;
    doc["p"] = report.spec.prime().value();
    doc["R"] = report.spec.R();
    doc["S"] = report.spec.S();
    doc["N"] = report.spec.size();
    doc["tol"] = report.tol;
    doc["pass"] = report.pass();
    auto& checks = doc["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : report.checks) {
        nlohmann::ordered_json entry;
        entry["name"] = c.name;
        entry["pass"] = c.pass;
        entry["max_residual"] = c.max_residual;
        entry["failures"] = c.failures;
        checks.push_back(std::move(entry));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace padic
