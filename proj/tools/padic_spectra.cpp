#include "padic/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common_flags(CLI::App* cmd, padic::RunConfig& config) {
    cmd->add_option("--kernel", config.kernel_path, "kernel spec (JSON)");
    cmd->add_option("--p", config.p, "prime");
    cmd->add_option("--tol", config.tol, "tolerance");
    cmd->add_option("--out", config.out_path, "write output here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    padic::RunConfig config;
    CLI::App app{"Spectra and diffusion of ultrametric operators on the p-adic line"};
    app.require_subcommand(1);

    auto* eig = app.add_subcommand("eigenvalues", "eigenvalues lambda(gamma, n) on a range of scales");
    add_common_flags(eig, config);
    eig->add_option("--gamma-min", config.gamma_min);
    eig->add_option("--gamma-max", config.gamma_max);
    eig->add_option("--n", config.n_list, "ball positions m/p^k, comma separated")->delimiter(',');
    eig->add_flag("--restricted", config.restricted, "restrict the generator to |x| <= p^R");
    eig->add_option("--R", config.R);

    auto* surv = app.add_subcommand("survival", "survival probability of the unit ball");
    add_common_flags(surv, config);
    surv->add_option("--times", config.times, "comma list or logspace:a:b:count");
    surv->add_flag("--restricted", config.restricted, "restrict the generator to |x| <= p^R");
    surv->add_option("--R", config.R);

    auto* eval = app.add_subcommand("kernel-eval", "evaluate T(x, y)");
    add_common_flags(eval, config);
    eval->add_option("--x", config.x)->required();
    eval->add_option("--y", config.y)->required();

    auto* dec = app.add_subcommand("decompose", "wavelet expansion of a ball indicator");
    add_common_flags(dec, config);
    dec->add_option("--gamma", config.gamma)->required();
    dec->add_option("--n", config.n_list);
    dec->add_option("--gamma-max", config.gamma_max)->required();

    auto* ver = app.add_subcommand("verify", "check the kernel against the dense grid oracle");
    add_common_flags(ver, config);
    ver->add_option("--R", config.R);
    ver->add_option("--S", config.S);

    auto* spec = app.add_subcommand("spectrum", "restricted spectrum with multiplicities");
    add_common_flags(spec, config);
    spec->add_option("--R", config.R);
    spec->add_option("--S", config.S);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? padic::exit_ok : padic::exit_parse_error;
    }

    return padic::run_command(app.get_subcommands().front()->get_name(), config, std::cout, std::cerr);
}
