#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padic/commands.hpp"
#include "padic/kernel_spec.hpp"
#include "padic/spectra.hpp"
#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace padic;
using padic::testing::F;

namespace {

const std::string data_dir = PADIC_TEST_DATA_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::string& command, RunConfig config) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_command(command, config, out, err);
    return {code, out.str(), err.str()};
}

RunConfig with_kernel(const std::string& file) {
    RunConfig c;
    c.kernel_path = data_dir + "/" + file;
    return c;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        rows.push_back(fields);
    }
    return rows;
}

class Lopsided final : public KernelCoefficients {
public:
    explicit Lopsided(Prime p) : KernelCoefficients(p), base_(p, 1.0) {}
    double coeff(long gamma, const FractionalIndex& n) const override { return base_.coeff(gamma, n); }
    double evaluate_pair(const PAdicRational& x, const PAdicRational& y) const override {
        return KernelCoefficients::evaluate_pair(x, y) * (x.to_double() < y.to_double() ? 1.01 : 1.0);
    }

private:
    RadialPowerKernel base_;
};

}  // namespace

TEST_CASE("kernel spec parsing") {
    auto vlad = parse_kernel_spec(R"({"type": "vladimirov", "p": 2, "alpha": 1.5})");
    CHECK(vlad->prime().value() == 2);
    CHECK(vlad->coeff(1, F(2, 0, 0)) == doctest::Approx(std::pow(2.0, -2.5)));

    auto radial = parse_kernel_spec(R"({"type": "radial", "p": 3, "f": [[0, 2.0], [1, 0.5]]})");
    CHECK(radial->coeff(0, F(3, 1, 1)) == 2.0);
    CHECK(radial->coeff(5, F(3, 0, 0)) == 0.0);
    auto radial_bg = parse_kernel_spec(R"({"type": "radial", "p": 3, "f": [[0, 2.0]], "alpha": 1})");
    CHECK(radial_bg->coeff(1, F(3, 0, 0)) == doctest::Approx(1.0 / 9.0));

    auto product = load_kernel_spec(data_dir + "/product.json");
    CHECK(product->prime().value() == 3);
    // ball (0, 1/3) holds n0 = 1/3, so g(0) applies
    CHECK(product->coeff(0, F(3, 1, 1)) == 2.0);
    // the unit ball around 0 sits at distance 3 from n0
    CHECK(product->coeff(0, F(3, 0, 0)) == 2.0 * 0.25);
    CHECK(product->coeff(1, F(3, 0, 0)) == 0.5 * 1.0);

    auto table = load_kernel_spec(data_dir + "/table.json");
    CHECK(table->coeff(-1, F(2, 3, 2)) == 2.0);
    CHECK(table->coeff(1, F(2, 1, 1)) == 0.25);
    CHECK(table->coeff(1, F(2, 0, 0)) == 0.0);

    const char* bad[] = {
        "not json",
        "[]",
        R"({"p": 2, "alpha": 1})",
        R"({"type": "vladimirov", "alpha": 1})",
        R"({"type": "vladimirov", "p": 4, "alpha": 1})",
        R"({"type": "vladimirov", "p": 2})",
        R"({"type": "vladimirov", "p": 2, "alpha": 0})",
        R"({"type": "vladimirov", "p": 2, "alpha": 1, "f": []})",
        R"({"type": "radial", "p": 2, "f": [[0, -1.0]]})",
        R"({"type": "radial", "p": 2, "f": [[0, 1.0], [0, 2.0]]})",
        R"({"type": "radial", "p": 2, "f": [[0.5, 1.0]]})",
        R"({"type": "radial", "p": 2, "f": [], "colour": "red"})",
        R"({"type": "product", "p": 2, "f": [], "g": [], "g0": 1})",
        R"({"type": "product", "p": 2, "f": [], "g": [], "g0": 1, "n0": {"m": 1, "k": 1, "z": 0}})",
        R"({"type": "table", "p": 2, "entries": [[0, {"m": 2, "k": 1}, 1.0]]})",
        R"({"type": "table", "p": 2, "entries": [[0, {"m": 1, "k": 1}, 1.0], [0, {"m": 1, "k": 1}, 2.0]]})",
        R"({"type": "table", "p": 2, "entries": [[0, {"m": 1}, 1.0]]})",
        R"({"type": "spline", "p": 2})",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_kernel_spec(text), SpecError);
    }
    CHECK_THROWS_AS(load_kernel_spec(data_dir + "/missing.json"), SpecError);
}

TEST_CASE("time grids and positions") {
    CHECK(parse_times("0") == std::vector<double>{0.0});
    CHECK(parse_times("0, 0.5,2") == std::vector<double>{0.0, 0.5, 2.0});
    const auto log = parse_times("logspace:1e-2:1e2:5");
    REQUIRE(log.size() == 5);
    CHECK(log.front() == 1e-2);
    CHECK(log[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(log.back() == 1e2);
    CHECK_THROWS_AS(parse_times("1,0.5"), ParseError);
    CHECK_THROWS_AS(parse_times("1,1"), ParseError);
    CHECK_THROWS_AS(parse_times("-1"), ParseError);
    CHECK_THROWS_AS(parse_times("abc"), ParseError);
    CHECK_THROWS_AS(parse_times("logspace:0:1:3"), ParseError);
    CHECK_THROWS_AS(parse_times("logspace:1:10"), ParseError);
    CHECK_THROWS_AS(parse_times("inf"), ParseError);

    CHECK(parse_fraction(Prime(2), "0").is_zero());
    CHECK(parse_fraction(Prime(2), "3/2^3") == F(2, 3, 3));
    CHECK(parse_fraction(Prime(3), "2/9") == F(3, 2, 2));
    CHECK_THROWS_AS(parse_fraction(Prime(2), "1"), ParseError);
    CHECK_THROWS_AS(parse_fraction(Prime(2), "5/4"), ParseError);
    CHECK_THROWS_AS(parse_fraction(Prime(2), "-1/4"), ParseError);
    CHECK_THROWS_AS(parse_fraction(Prime(2), "1/3"), ParseError);
}

TEST_CASE("eigenvalues command") {
    Outcome r = run("eigenvalues", with_kernel("vladimirov.json"));
    CHECK(r.code == exit_ok);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"gamma", "n_numerator", "n_depth", "lambda", "tail_bound"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const long gamma = std::stol(rows[i][0]);
        CHECK(gamma == static_cast<long>(i) - 3);
        CHECK(std::stod(rows[i][3]) == doctest::Approx(vladimirov_eigenvalue(Prime(2), 1.0, gamma)).epsilon(1e-15));
        if (i > 1) CHECK(std::stod(rows[i][3]) / std::stod(rows[i - 1][3]) == doctest::Approx(0.5).epsilon(1e-15));
    }

    RunConfig c = with_kernel("zero.json");
    c.n_list = {"0,1/3", "2/9"};
    r = run("eigenvalues", c);
    CHECK(r.code == exit_ok);
    rows = csv_rows(r.out);
    CHECK(rows.size() == 1 + 5 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] == "0");

    r = run("eigenvalues", with_kernel("diverging.json"));
    CHECK(r.code == exit_math_domain);
    CHECK(r.out.empty());
    CHECK(r.err.find("diverges") != std::string::npos);

    c = with_kernel("vladimirov.json");
    c.restricted = true;
    c.R = 1;
    c.gamma_min = 1;
    c.gamma_max = 1;
    r = run("eigenvalues", c);
    CHECK(csv_rows(r.out)[1][3] == "0.5");
    c.gamma_max = 2;
    CHECK(run("eigenvalues", c).code == exit_parse_error);

    c = with_kernel("vladimirov.json");
    c.n_list = {"1/3"};
    CHECK(run("eigenvalues", c).code == exit_parse_error);
    CHECK(run("eigenvalues", with_kernel("missing.json")).code == exit_parse_error);
    CHECK(run("eigenvalues", RunConfig{}).code == exit_parse_error);
    c = with_kernel("vladimirov.json");
    c.p = 3;
    CHECK(run("eigenvalues", c).code == exit_parse_error);
    c = with_kernel("vladimirov.json");
    c.tol = -1.0;
    CHECK(run("eigenvalues", c).code == exit_parse_error);
}

TEST_CASE("survival command") {
    RunConfig c = with_kernel("vladimirov.json");
    Outcome r = run("survival", c);
    CHECK(r.code == exit_ok);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][1] == "1");

    c.times = "logspace:1e-2:1e2:21";
    rows = csv_rows(run("survival", c).out);
    REQUIRE(rows.size() == 22);
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) <= std::stod(rows[i - 1][1]));

    c.restricted = true;
    c.R = 3;
    c.times = "0,1,1000";
    rows = csv_rows(run("survival", c).out);
    CHECK(rows[1][1] == "1");
    CHECK(std::stod(rows[3][1]) == doctest::Approx(0.125).epsilon(1e-12));

    c.times = "2,1";
    CHECK(run("survival", c).code == exit_parse_error);
    CHECK(run("survival", with_kernel("diverging.json")).code == exit_math_domain);
}

TEST_CASE("kernel-eval, decompose and spectrum commands") {
    RunConfig c = with_kernel("vladimirov.json");
    c.x = "0";
    c.y = "1/2";
    Outcome r = run("kernel-eval", c);
    CHECK(r.code == exit_ok);
    CHECK(r.out == "x,y,gamma,n_numerator,n_depth,kernel\n0,1/2,1,0,0,0.25\n");
    c.y = "0";
    CHECK(run("kernel-eval", c).code == exit_parse_error);
    c.y = "1/3";
    CHECK(run("kernel-eval", c).code == exit_parse_error);

    RunConfig d;
    d.p = 2;
    d.gamma = 0;
    d.gamma_max = 1;
    r = run("decompose", d);
    CHECK(r.code == exit_ok);
    CHECK(r.out == "kind,gamma,j,n_numerator,n_depth,re,im\nwavelet,1,1,0,0,0.70710678118654757,0\nresidual,1,,0,0,0.5,0\n");
    d.gamma_max = 0;
    CHECK(run("decompose", d).code == exit_parse_error);
    d.p = 4;
    d.gamma_max = 1;
    CHECK(run("decompose", d).code == exit_parse_error);

    RunConfig s = with_kernel("vladimirov.json");
    s.R = 1;
    s.S = 0;
    r = run("spectrum", s);
    CHECK(r.out == "lambda,multiplicity,gamma,n_numerator,n_depth\n0.5,1,1,0,0\n0,1,,,\n");
}

TEST_CASE("verify command") {
    Outcome r = run("verify", with_kernel("vladimirov.json"));
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("\"pass\": true") != std::string::npos);
    CHECK(r.out.find("\"pass\": false") == std::string::npos);

    RunConfig z = with_kernel("zero.json");
    z.R = 2;
    z.S = 1;
    r = run("verify", z);
    CHECK(r.code == exit_ok);
    RunConfig sp = with_kernel("zero.json");
    sp.R = 2;
    sp.S = 1;
    for (const auto& row : csv_rows(run("spectrum", sp).out)) {
        if (row[0] == "lambda") continue;
        CHECK(row[0] == "0");
    }

    RunConfig big = with_kernel("vladimirov.json");
    big.R = 8;
    big.S = 8;
    CHECK(run("verify", big).code == exit_parse_error);

    // test hook: a kernel with a corrupted pointwise form
    std::ostringstream out;
    RunConfig plain;
    CHECK(cmd_verify(Lopsided(Prime(2)), plain, out) == exit_verification_failure);
    const std::string report = out.str();
    const auto sym = report.find("\"name\": \"symmetry\"");
    REQUIRE(sym != std::string::npos);
    CHECK(report.find("\"pass\": false", sym) < report.find("\"name\": \"sphere_constancy\""));
}

TEST_CASE("output is deterministic and can go to a file") {
    RunConfig c = with_kernel("product.json");
    c.times = "logspace:1e-3:1e3:40";
    setenv("PADIC_SPECTRA_THREADS", "1", 1);
    const Outcome a = run("survival", c);
    setenv("PADIC_SPECTRA_THREADS", "7", 1);
    const Outcome b = run("survival", c);
    unsetenv("PADIC_SPECTRA_THREADS");
    CHECK(a.code == exit_ok);
    CHECK(a.out == b.out);

    const auto path = std::filesystem::temp_directory_path() / "padic_spectra_cli_test.csv";
    c.out_path = path.string();
    const Outcome f = run("survival", c);
    CHECK(f.code == exit_ok);
    CHECK(f.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == a.out);
    std::filesystem::remove(path);
}
