#include "padic/kernel_spec.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace padic {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SpecError(std::string("missing field '") + key + "'");
    return *it;
}

long as_long(const json& v, const std::string& what) {
    if (!v.is_number_integer()) throw SpecError(what + " must be an integer");
    return v.get<long>();
}

double as_value(const json& v, const std::string& what) {
    if (!v.is_number()) throw SpecError(what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d) || d < 0.0) throw SpecError(what + " must be finite and non-negative");
    return d;
}

std::map<long, double> exponent_table(const json& v, const std::string& what) {
    if (!v.is_array()) throw SpecError(what + " must be an array of [exponent, value] pairs");
    std::map<long, double> out;
    for (const json& row : v) {
        if (!row.is_array() || row.size() != 2) throw SpecError(what + " rows must be [exponent, value]");
        const long e = as_long(row[0], what + " exponent");
        if (!out.emplace(e, as_value(row[1], what + " value")).second)
            throw SpecError(what + " lists exponent " + std::to_string(e) + " twice");
    }
    return out;
}

mpz_class as_integer(const json& v, const std::string& what) {
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) == 0) return z;
    }
    throw SpecError(what + " must be an integer");
}

std::pair<mpz_class, long> fraction_fields(const json& v, const std::string& what) {
    if (!v.is_object()) throw SpecError(what + " must be an object {\"m\": int, \"k\": int}");
    for (const auto& [key, value] : v.items())
        if (key != "m" && key != "k") throw SpecError(what + ": unknown field '" + key + "'");
    const long k = as_long(require(v, "k"), what + ".k");
    if (k < 0) throw SpecError(what + ".k must be non-negative");
    return {as_integer(require(v, "m"), what + ".m"), k};
}

FractionalIndex fraction_index(Prime p, const json& v, const std::string& what) {
    auto [m, k] = fraction_fields(v, what);
    if (m < 0 || m >= p.pow(static_cast<unsigned long>(k)))
        throw SpecError(what + ": m must satisfy 0 <= m < p^k");
    return FractionalIndex::make(p, m, k);
}

void check_fields(const json& spec, const std::set<std::string>& allowed, const std::string& type) {
    for (const auto& [key, value] : spec.items())
        if (!allowed.contains(key)) throw SpecError("unknown field '" + key + "' for kernel type '" + type + "'");
}

std::optional<double> optional_alpha(const json& spec) {
    auto it = spec.find("alpha");
    if (it == spec.end()) return std::nullopt;
    if (!it->is_number()) throw SpecError("alpha must be a number");
    const double a = it->get<double>();
    if (!std::isfinite(a)) throw SpecError("alpha must be finite");
    return a;
}

std::unique_ptr<KernelCoefficients> build(const json& spec) {
    if (!spec.is_object()) throw SpecError("kernel spec must be a JSON object");
    const json& type_field = require(spec, "type");
    if (!type_field.is_string()) throw SpecError("type must be a string");
    const std::string type = type_field.get<std::string>();

    const long p_raw = as_long(require(spec, "p"), "p");
    if (p_raw < 2 || !is_prime(static_cast<unsigned long>(p_raw))) throw SpecError("p must be a prime");
    const Prime p(static_cast<unsigned long>(p_raw));

    if (type == "vladimirov") {
        check_fields(spec, {"type", "p", "alpha"}, type);
        const auto alpha = optional_alpha(spec);
        if (!alpha) throw SpecError("missing field 'alpha'");
        if (!(*alpha > 0.0)) throw SpecError("vladimirov kernel needs alpha > 0");
        return std::make_unique<RadialPowerKernel>(p, *alpha);
    }
    if (type == "radial") {
        check_fields(spec, {"type", "p", "f", "alpha"}, type);
        return std::make_unique<RadialKernel>(p, RadialProfile(exponent_table(require(spec, "f"), "f"), optional_alpha(spec)));
    }
    if (type == "product") {
        check_fields(spec, {"type", "p", "f", "g", "g0", "n0", "alpha"}, type);
        RadialProfile f(exponent_table(require(spec, "f"), "f"), optional_alpha(spec));
        NormProfile g{exponent_table(require(spec, "g"), "g"), as_value(require(spec, "g0"), "g0")};
        auto [m, k] = fraction_fields(require(spec, "n0"), "n0");
        return std::make_unique<ProductKernel>(p, std::move(f), std::move(g), PAdicRational(p, m, k));
    }
    if (type == "table") {
        check_fields(spec, {"type", "p", "entries"}, type);
        const json& entries = require(spec, "entries");
        if (!entries.is_array()) throw SpecError("entries must be an array");
        std::map<BallIndex, double> table;
        for (const json& row : entries) {
            if (!row.is_array() || row.size() != 3) throw SpecError("entries rows must be [gamma, {m, k}, value]");
            BallIndex ball{as_long(row[0], "entry gamma"), fraction_index(p, row[1], "entry n")};
            if (!table.emplace(std::move(ball), as_value(row[2], "entry value")).second)
                throw SpecError("duplicate table entry");
        }
        return std::make_unique<TableKernel>(p, std::move(table));
    }
    throw SpecError("unknown kernel type '" + type + "'");
}

}  // namespace

std::unique_ptr<KernelCoefficients> parse_kernel_spec(std::string_view json_text) {
    json spec;
    try {
        spec = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SpecError(std::string("invalid JSON: ") + e.what());
    }
    try {
        return build(spec);
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed kernel spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SpecError(e.what());
    }
}

std::unique_ptr<KernelCoefficients> load_kernel_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open kernel spec " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kernel_spec(buf.str());
}

}  // namespace padic
