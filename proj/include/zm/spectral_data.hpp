#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zm/report.hpp"

namespace zm {

// Record of a cusp form on PSL2(Z): nu = i t, alpha = |rho(1)|^2 + |rho(-1)|^2,
// tau[n - 1] = tau(n).
struct MaassFormRecord {
    std::string label;
    int eps = 1;
    double t = 0.0;
    double alpha = 0.0;
    std::vector<double> tau;
    std::optional<double> central_H;
    std::string normalization_tag;

    double tau_at(long n) const;  // throws out_of_range past the stored length
    std::int64_t max_n() const { return static_cast<std::int64_t>(tau.size()); }
};

struct GaussTau {
    int a = 0;
    int b = 0;
    double value = 0.0;
};

// Record for PSL2(Z[i]). tau holds one entry per unit orbit, written as a + bi.
struct GaussianMaassFormRecord {
    std::string label;
    int p = 0;
    double t = 0.0;
    double rho1_sq = 0.0;
    int eps = 1;
    std::vector<GaussTau> tau;
    std::optional<double> central_H;

    // tau(a + bi) through the unit action on the stored representative;
    // nullopt when the orbit is not stored.
    std::optional<double> tau_at(long a, long b) const;
};

// a + bi -> the associate with a > 0, b >= 0, and the power k with n = i^k rep.
struct GaussNormalForm {
    long a = 0;
    long b = 0;
    int k = 0;
};
GaussNormalForm gauss_normal_form(long a, long b);

enum class CatalogKind { real, gaussian };

struct QuarantinedRecord {
    std::size_t line = 0;
    std::string label;
    std::vector<std::string> violations;
};

struct Catalog {
    CatalogKind kind = CatalogKind::real;
    std::vector<MaassFormRecord> real;
    std::vector<GaussianMaassFormRecord> gaussian;
    std::vector<QuarantinedRecord> quarantined;
    std::vector<std::string> warnings;

    std::size_t size() const { return kind == CatalogKind::real ? real.size() : gaussian.size(); }
    // FNV-1a over the saved form; unchanged by every read-only operation.
    std::uint64_t hash() const;
};

// Malformed catalog line. The message starts with "line N:".
class CatalogError : public std::invalid_argument {
public:
    CatalogError(std::size_t line, const std::string& what);
    std::size_t line;
};

// One JSON object per line. Malformed lines throw CatalogError; records that
// parse but break an invariant (at tol) are quarantined and loading goes on.
Catalog load_catalog(std::istream& in, CatalogKind kind, double tol = 1e-6);
Catalog load_catalog_file(const std::string& path, CatalogKind kind, double tol = 1e-6);
void save_catalog(std::ostream& out, const Catalog& cat);

json record_to_json(const MaassFormRecord& r);
json record_to_json(const GaussianMaassFormRecord& r);

// Hecke relations among the stored coefficients, plus the record invariants.
VerificationReport validate_hecke(const MaassFormRecord& r, double tol = 1e-6);
VerificationReport validate_hecke(const GaussianMaassFormRecord& r, double tol = 1e-6);

struct Smoothing {
    enum class Kind { none, gaussian };
    Kind kind = Kind::none;
    double X = 0.0;  // terms damped by exp(-(n/X)^2), resp. exp(-|n|^2/X^2)

    static Smoothing none() { return {}; }
    static Smoothing gaussian(double X);
};

struct HeckeValue {
    cplx value{};
    std::string provenance;  // "series" or "stored"
    std::int64_t terms = 0;
};

// Raised for s where the Dirichlet series does not converge and no stored
// value applies.
class UnavailableError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Re s > 1: the truncated series (over the stored coefficients, optionally
// damped). s = 1/2: the stored central value, verbatim. Anything else throws.
// n_limit > 0 cuts the real series at n <= n_limit (resp. |n|^2 <= n_limit).
HeckeValue hecke_series(const MaassFormRecord& r, cplx s, Smoothing sm = {}, std::int64_t n_limit = 0);
HeckeValue hecke_series(const GaussianMaassFormRecord& r, cplx s, Smoothing sm = {}, std::int64_t n_limit = 0);

}  // namespace zm
