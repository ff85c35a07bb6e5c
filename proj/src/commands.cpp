#include "padic/commands.hpp"

#include "padic/diffusion.hpp"
#include "padic/format.hpp"
#include "padic/grid_oracle.hpp"
#include "padic/kernel_spec.hpp"
#include "padic/spectra.hpp"
#include "padic/wavelets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace padic {

namespace {

double parse_double(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError("not a number: '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double config_tol(const RunConfig& config, double fallback) {
    const double tol = config.tol.value_or(fallback);
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ParseError("--tol must be positive");
    return tol;
}

std::vector<FractionalIndex> n_values(Prime p, const RunConfig& config) {
    std::vector<FractionalIndex> out;
    if (config.n_list.empty()) out.push_back(FractionalIndex::zero(p));
    for (const std::string& item : config.n_list)
        for (std::string_view part : split(item, ',')) out.push_back(parse_fraction(p, part));
    return out;
}

PAdicRational parse_point(Prime p, const std::string& text, const char* flag) {
    if (text.empty()) throw ParseError(std::string(flag) + " is required");
    try {
        return PAdicRational::parse(p, text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string(flag) + ": " + e.what());
    }
}

}  // namespace

std::vector<double> parse_times(std::string_view text) {
    std::vector<double> times;
    if (text.starts_with("logspace:")) {
        const auto parts = split(text.substr(9), ':');
        if (parts.size() != 3) throw ParseError("logspace spec is logspace:a:b:count");
        const double a = parse_double(parts[0]);
        const double b = parse_double(parts[1]);
        const double count_d = parse_double(parts[2]);
        if (!(a > 0.0) || !(b > 0.0)) throw ParseError("logspace endpoints must be positive");
        if (count_d < 1.0 || count_d != std::floor(count_d)) throw ParseError("logspace count must be a positive integer");
        const auto count = static_cast<std::size_t>(count_d);
        const double la = std::log10(a);
        const double lb = std::log10(b);
        for (std::size_t i = 0; i < count; ++i) {
            if (i == 0) times.push_back(a);
            else if (i + 1 == count) times.push_back(b);
            else times.push_back(std::pow(10.0, la + (lb - la) * static_cast<double>(i) / static_cast<double>(count - 1)));
        }
    } else {
        for (std::string_view part : split(text, ',')) times.push_back(parse_double(part));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) throw ParseError("times must be finite and non-negative");
        if (i > 0 && !(times[i] > times[i - 1])) throw ParseError("times must be strictly ascending");
    }
    return times;
}

FractionalIndex parse_fraction(Prime p, std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    PAdicRational x = PAdicRational::zero(p);
    try {
        x = PAdicRational::parse(p, text);
    } catch (const std::invalid_argument& e) {
        throw ParseError("--n: " + std::string(e.what()));
    }
    const long k = std::max(0L, x.scale());
    const mpz_class& m = x.numerator();
    if (m < 0 || m >= p.pow(static_cast<unsigned long>(k)) || (x.scale() <= 0 && m != 0))
        throw ParseError("--n: '" + std::string(text) + "' is not of the form m/p^k with 0 <= m < p^k");
    return FractionalIndex::make(p, m, k);
}

void cmd_eigenvalues(const KernelCoefficients& K, const RunConfig& config, std::ostream& out) {
    const double tol = config_tol(config, default_tol);
    if (config.gamma_min > config.gamma_max) throw ParseError("--gamma-min exceeds --gamma-max");
    const std::vector<FractionalIndex> ns = n_values(K.prime(), config);
    out << "gamma,n_numerator,n_depth,lambda,tail_bound\n";
    for (long gamma = config.gamma_min; gamma <= config.gamma_max; ++gamma) {
        for (const FractionalIndex& n : ns) {
            double lambda = 0.0;
            double bound = 0.0;
            if (config.restricted) {
                lambda = eigenvalue_restricted(K, gamma, n, config.R);
            } else {
                const EigenvalueResult r = eigenvalue(K, gamma, n, tol);
                lambda = r.lambda;
                bound = r.tail_bound;
            }
            out << gamma << ',' << n.numerator().get_str() << ',' << n.depth() << ',' << format_double(lambda) << ','
                << format_double(bound) << '\n';
        }
    }
}

void cmd_survival(const KernelCoefficients& K, const RunConfig& config, std::ostream& out) {
    const double tol = config_tol(config, default_tol);
    const std::vector<double> times = parse_times(config.times);
    if (config.restricted) {
        if (config.R < 1) throw ParseError("--R must be at least 1");
        write_csv(out, survival_restricted_curve(K, times, config.R));
    } else {
        write_csv(out, survival_curve(K, times, tol));
    }
}

void cmd_kernel_eval(const KernelCoefficients& K, const RunConfig& config, std::ostream& out) {
    const PAdicRational x = parse_point(K.prime(), config.x, "--x");
    const PAdicRational y = parse_point(K.prime(), config.y, "--y");
    if (x == y) throw ParseError("--x and --y must differ");
    const SeparationScale s = separation_scale(x, y);
    out << "x,y,gamma,n_numerator,n_depth,kernel\n";
    out << x.to_string() << ',' << y.to_string() << ',' << s.gamma << ',' << s.n.numerator().get_str() << ','
        << s.n.depth() << ',' << format_double(kernel_eval(K, x, y)) << '\n';
}

void cmd_decompose(Prime p, const RunConfig& config, std::ostream& out) {
    if (!config.gamma) throw ParseError("decompose needs --gamma");
    const std::vector<FractionalIndex> ns = n_values(p, config);
    if (ns.size() != 1) throw ParseError("decompose takes a single --n");
    if (config.gamma_max <= *config.gamma) throw ParseError("--gamma-max must exceed --gamma");
    const WaveletExpansion e = indicator_expansion(*config.gamma, ns.front(), config.gamma_max);
    out << "kind,gamma,j,n_numerator,n_depth,re,im\n";
    for (const WaveletTerm& term : e.terms) {
        const std::complex<double> c = term.coefficient();
        out << "wavelet," << term.index.gamma() << ',' << term.index.j() << ','
            << term.index.n().numerator().get_str() << ',' << term.index.n().depth() << ',' << format_double(c.real())
            << ',' << format_double(c.imag()) << '\n';
    }
    if (e.residual) {
        const ResidualBall& r = *e.residual;
        out << "residual," << r.ball.gamma << ",," << r.ball.n.numerator().get_str() << ',' << r.ball.n.depth() << ','
            << format_double(r.value) << ",0\n";
    }
}

void cmd_spectrum(const KernelCoefficients& K, const RunConfig& config, std::ostream& out) {
    write_spectrum_csv(out, restricted_spectrum(K, GridSpec(K.prime(), config.R, config.S)));
}

ExitCode cmd_verify(const KernelCoefficients& K, const RunConfig& config, std::ostream& out) {
    const VerificationReport report = verify_grid(K, GridSpec(K.prime(), config.R, config.S), config_tol(config, 1e-10));
    write_report_json(out, report);
    return report.pass() ? exit_ok : exit_verification_failure;
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::ostringstream buffer;
    int code = exit_ok;
    try {
        std::unique_ptr<KernelCoefficients> kernel;
        if (config.kernel_path) {
            kernel = load_kernel_spec(*config.kernel_path);
            if (config.p && *config.p != kernel->prime().value())
                throw ParseError("--p disagrees with the prime of the kernel spec");
        } else if (command != "decompose") {
            throw ParseError(command + " needs --kernel");
        }

        if (command == "eigenvalues") cmd_eigenvalues(*kernel, config, buffer);
        else if (command == "survival") cmd_survival(*kernel, config, buffer);
        else if (command == "kernel-eval") cmd_kernel_eval(*kernel, config, buffer);
        else if (command == "spectrum") cmd_spectrum(*kernel, config, buffer);
        else if (command == "verify") code = cmd_verify(*kernel, config, buffer);
        else if (command == "decompose") {
            if (!kernel && !config.p) throw ParseError("decompose needs --p or --kernel");
            if (config.p && !is_prime(*config.p)) throw ParseError("--p must be a prime");
            cmd_decompose(kernel ? kernel->prime() : Prime(*config.p), config, buffer);
        } else {
            throw ParseError("unknown command '" + command + "'");
        }
    } catch (const SpecError& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse_error;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse_error;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse_error;
    } catch (const SeriesError& e) {
        err << "error: " << e.what() << " (" << to_string(e.diagnosis().kind) << " after " << e.diagnosis().terms
            << " terms)\n";
        return exit_math_domain;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_math_domain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_parse_error;
    }

    if (config.out_path) {
        std::ofstream file(*config.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << *config.out_path << '\n';
            return exit_parse_error;
        }
        file << buffer.str();
    } else {
        out << buffer.str();
    }
    return code;
}

}  // namespace padic
