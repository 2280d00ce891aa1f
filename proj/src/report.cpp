#include "zm/report.hpp"

#include <cmath>
#include <sstream>

namespace zm {

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

namespace {

Check& push(VerificationReport& r, std::string id, json params, cplx lhs, cplx rhs, double res, double tol,
            std::string note) {
    Check c;
    c.identity = std::move(id);
    c.params = std::move(params);
    c.lhs = lhs;
    c.rhs = rhs;
    c.residual = res;
    c.tolerance = tol;
    c.pass = std::isfinite(res) && res <= tol;
    c.note = std::move(note);
    r.checks.push_back(std::move(c));
    return r.checks.back();
}

}  // namespace

Check& VerificationReport::add_relative(std::string identity, json params, cplx lhs, cplx rhs, double tol,
                                        std::string note) {
    double m = std::max(std::abs(lhs), std::abs(rhs));
    double res = m < 1e-300 ? std::abs(lhs - rhs) : std::abs(lhs - rhs) / m;
    return push(*this, std::move(identity), std::move(params), lhs, rhs, res, tol, std::move(note));
}

Check& VerificationReport::add_absolute(std::string identity, json params, cplx lhs, cplx rhs, double tol,
                                        std::string note) {
    return push(*this, std::move(identity), std::move(params), lhs, rhs, std::abs(lhs - rhs), tol, std::move(note));
}

void VerificationReport::append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

double VerificationReport::worst_residual() const {
    double w = 0.0;
    for (const auto& c : checks) w = std::max(w, c.residual / c.tolerance);
    return w;
}

json VerificationReport::to_json() const {
    json arr = json::array();
    for (const auto& c : checks) {
        json j{{"identity", c.identity}, {"params", c.params}, {"lhs", zm::to_json(c.lhs)},
               {"rhs", zm::to_json(c.rhs)}, {"residual", c.residual}, {"tolerance", c.tolerance},
               {"pass", c.pass}};
        if (!c.note.empty()) j["note"] = c.note;
        arr.push_back(std::move(j));
    }
    return json{{"suite", suite}, {"all_pass", all_pass()}, {"checks", std::move(arr)}};
}

std::string VerificationReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "identity,params,lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,pass\n";
    for (const auto& c : checks) {
        std::string p = c.params.dump();
        std::string q;
        for (char ch : p) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        os << c.identity << ",\"" << q << "\"," << c.lhs.real() << ',' << c.lhs.imag() << ',' << c.rhs.real() << ','
           << c.rhs.imag() << ',' << c.residual << ',' << c.tolerance << ',' << (c.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace zm
