#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "zm/common.hpp"

namespace zm {

using json = nlohmann::ordered_json;

struct Check {
    std::string identity;
    json params = json::object();
    cplx lhs{};
    cplx rhs{};
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::string suite;
    std::vector<Check> checks;

    // residual = |lhs - rhs| / max(|lhs|, |rhs|) (absolute when both are tiny)
    Check& add_relative(std::string identity, json params, cplx lhs, cplx rhs, double tol, std::string note = {});
    // residual = |lhs - rhs|, for identities whose exact value is zero or O(1)
    Check& add_absolute(std::string identity, json params, cplx lhs, cplx rhs, double tol, std::string note = {});
    void append(const VerificationReport& other);

    bool all_pass() const;
    double worst_residual() const;
    json to_json() const;
    std::string to_csv() const;
};

json to_json(cplx z);

}  // namespace zm
