#pragma once

// Kernel specification files (JSON):
//
//   {"type": "vladimirov", "p": 2, "alpha": 1.0}
//   {"type": "radial", "p": 3, "f": [[radius_exp, value], ...], "alpha": 1.5}
//   {"type": "product", "p": 2, "f": [...], "g": [[norm_exp, value], ...],
//    "g0": 0.5, "n0": {"m": 1, "k": 1}, "alpha": 1.0}
//   {"type": "table", "p": 2, "entries": [[gamma, {"m": 1, "k": 1}, value], ...]}
//
// "alpha" is optional for radial and product kernels; when present, radii
// missing from "f" follow p^(-gamma (1 + alpha)). Unknown fields are rejected.

#include "padic/kernels.hpp"

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace padic {

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::unique_ptr<KernelCoefficients> parse_kernel_spec(std::string_view json_text);
std::unique_ptr<KernelCoefficients> load_kernel_spec(const std::filesystem::path& path);

}  // namespace padic
