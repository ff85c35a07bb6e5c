#pragma once

// Command implementations behind the padic-spectra executable. Each command
// writes its whole result to a buffer first so a failure never leaves partial
// output behind.

#include "padic/kernels.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace padic {

enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failure = 1,
    exit_parse_error = 2,
    exit_math_domain = 3,
};

/// Malformed command-line values (bad n list, time grid, points).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::optional<std::string> kernel_path;
    std::optional<unsigned long> p;
    long gamma_min = -2;
    long gamma_max = 2;
    std::optional<long> gamma;          // decompose
    std::vector<std::string> n_list;    // empty means {0}
    std::string times = "0";
    std::string x;                      // kernel-eval
    std::string y;
    long R = 3;
    long S = 2;
    std::optional<double> tol;          // defaults: 1e-12, verify 1e-10
    bool restricted = false;
    std::optional<std::string> out_path;
};

/// "0,0.5,1" or "logspace:a:b:count" (count values from a to b, both > 0).
/// Values must be finite, non-negative and strictly ascending.
std::vector<double> parse_times(std::string_view text);

/// Elements m/p^k of Q_p/Z_p with 0 <= m < p^k, e.g. "0", "1/2", "3/2^3".
FractionalIndex parse_fraction(Prime p, std::string_view text);

/// CSV `gamma,n_numerator,n_depth,lambda,tail_bound`.
void cmd_eigenvalues(const KernelCoefficients& K, const RunConfig& config, std::ostream& out);
/// CSV `t,survival,remainder_bound`.
void cmd_survival(const KernelCoefficients& K, const RunConfig& config, std::ostream& out);
/// CSV `x,y,gamma,n_numerator,n_depth,kernel`.
void cmd_kernel_eval(const KernelCoefficients& K, const RunConfig& config, std::ostream& out);
/// CSV `kind,gamma,j,n_numerator,n_depth,re,im`; the residual row has kind
/// `residual` and no j.
void cmd_decompose(Prime p, const RunConfig& config, std::ostream& out);
/// CSV `lambda,multiplicity,gamma,n_numerator,n_depth`.
void cmd_spectrum(const KernelCoefficients& K, const RunConfig& config, std::ostream& out);
/// JSON report; returns exit_ok iff every check passes.
ExitCode cmd_verify(const KernelCoefficients& K, const RunConfig& config, std::ostream& out);

/// Loads the kernel, runs `command` and maps failures onto exit codes,
/// printing messages to `err`. Output goes to config.out_path or `out`.
int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace padic
