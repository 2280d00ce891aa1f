#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zm/parallel.hpp"
#include "zm/quadrature.hpp"
#include "zm/report.hpp"

namespace zm {

// Named batteries of identity checks, each at a fixed set of parameter
// points with a pinned tolerance per check.
struct SuiteOptions {
    QuadratureSpec spec;
    std::optional<double> tol;  // replaces every pinned tolerance
    Exec exec = Exec::parallel;  // fan-out over points; reports merge in point order
};

const std::vector<std::string>& suite_names();  // "all" excluded
bool is_suite(const std::string& name);

// Throws std::invalid_argument for an unknown name. "all" runs every suite in
// suite_names() order, each check tagged with its suite in params["suite"].
VerificationReport run_suite(const std::string& name, const SuiteOptions& opt = {});

// Re-judge every check whose identity matches with a new tolerance.
void retolerance(VerificationReport& rep, const std::string& identity, double tol);

}  // namespace zm
