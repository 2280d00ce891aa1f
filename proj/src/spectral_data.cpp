#include "zm/spectral_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace zm {

namespace {

double eps_pow(int eps, int k) { return (eps == -1 && (k & 1)) ? -1.0 : 1.0; }

long norm_of(long a, long b) { return a * a + b * b; }

// orbit normal form -> tau(rep); first stored associate wins
std::map<std::pair<long, long>, double> orbit_table(const GaussianMaassFormRecord& r) {
    std::map<std::pair<long, long>, double> out;
    for (const auto& e : r.tau) {
        if (e.a == 0 && e.b == 0) continue;
        auto nf = gauss_normal_form(e.a, e.b);
        out.emplace(std::pair{nf.a, nf.b}, eps_pow(r.eps, nf.k) * e.value);
    }
    return out;
}

struct GInt {
    long a, b;
};

GInt gmul(GInt x, GInt y) { return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a}; }

// exact quotient x / y, or nullopt
std::optional<GInt> gdiv_exact(GInt x, GInt y) {
    long n = norm_of(y.a, y.b);
    long re = x.a * y.a + x.b * y.b;
    long im = x.b * y.a - x.a * y.b;
    if (re % n != 0 || im % n != 0) return std::nullopt;
    return GInt{re / n, im / n};
}

GInt ggcd(GInt x, GInt y) {
    while (y.a != 0 || y.b != 0) {
        long n = norm_of(y.a, y.b);
        long re = x.a * y.a + x.b * y.b;
        long im = x.b * y.a - x.a * y.b;
        GInt q{std::lround(double(re) / double(n)), std::lround(double(im) / double(n))};
        GInt qy = gmul(q, y);
        GInt rem{x.a - qy.a, x.b - qy.b};
        x = y;
        y = rem;
    }
    return x;
}

// divisors of g, one per unit class
std::vector<GInt> gdivisors(GInt g) {
    std::vector<GInt> out;
    long n = norm_of(g.a, g.b);
    for (long a = 1; a * a <= n; ++a)
        for (long b = 0; a * a + b * b <= n; ++b) {
            long nd = a * a + b * b;
            if (n % nd != 0) continue;
            if (gdiv_exact(g, {a, b})) out.push_back({a, b});
        }
    return out;
}

bool finite(double x) { return std::isfinite(x); }

template <class T>
T get_field(const json& j, const char* key, std::size_t line) {
    if (!j.contains(key)) throw CatalogError(line, std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw CatalogError(line, std::string("field \"") + key + "\" has the wrong type");
    }
}

int get_int(const json& j, const char* key, std::size_t line) {
    if (!j.contains(key)) throw CatalogError(line, std::string("missing field \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw CatalogError(line, std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

double get_number(const json& j, const char* key, std::size_t line) {
    if (!j.contains(key)) throw CatalogError(line, std::string("missing field \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number()) throw CatalogError(line, std::string("field \"") + key + "\" must be a number");
    return v.get<double>();
}

std::optional<double> get_optional_number(const json& j, const char* key, std::size_t line) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return get_number(j, key, line);
}

void unknown_keys(const json& j, std::initializer_list<const char*> known, std::size_t line,
                  std::vector<std::string>& warnings) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) warnings.push_back("line " + std::to_string(line) + ": ignored unknown field \"" + it.key() + "\"");
    }
}

MaassFormRecord parse_real(const json& j, std::size_t line, std::vector<std::string>& warnings) {
    unknown_keys(j, {"label", "eps", "t", "alpha", "tau", "H_half", "norm"}, line, warnings);
    MaassFormRecord r;
    r.label = get_field<std::string>(j, "label", line);
    r.eps = get_int(j, "eps", line);
    r.t = get_number(j, "t", line);
    r.alpha = get_number(j, "alpha", line);
    if (!j.contains("tau") || !j.at("tau").is_array()) throw CatalogError(line, "field \"tau\" must be an array");
    for (const auto& v : j.at("tau")) {
        if (!v.is_number()) throw CatalogError(line, "field \"tau\" must hold numbers");
        r.tau.push_back(v.get<double>());
    }
    r.central_H = get_optional_number(j, "H_half", line);
    if (j.contains("norm")) r.normalization_tag = get_field<std::string>(j, "norm", line);
    return r;
}

GaussianMaassFormRecord parse_gaussian(const json& j, std::size_t line, std::vector<std::string>& warnings) {
    unknown_keys(j, {"label", "p", "t", "rho1sq", "eps", "tau", "H_half"}, line, warnings);
    GaussianMaassFormRecord r;
    r.label = get_field<std::string>(j, "label", line);
    r.p = get_int(j, "p", line);
    r.t = get_number(j, "t", line);
    r.rho1_sq = get_number(j, "rho1sq", line);
    r.eps = get_int(j, "eps", line);
    if (!j.contains("tau") || !j.at("tau").is_array()) throw CatalogError(line, "field \"tau\" must be an array");
    for (const auto& e : j.at("tau")) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number())
            throw CatalogError(line, "field \"tau\" must hold [a, b, value] triples");
        r.tau.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    r.central_H = get_optional_number(j, "H_half", line);
    return r;
}

std::vector<std::string> failures(const VerificationReport& rep) {
    std::vector<std::string> out;
    for (const auto& c : rep.checks)
        if (!c.pass) out.push_back(c.identity + (c.note.empty() ? "" : " (" + c.note + ")"));
    return out;
}

void check_s(cplx s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw std::invalid_argument("hecke_series: s not finite");
}

}  // namespace

double MaassFormRecord::tau_at(long n) const {
    if (n < 1 || n > max_n()) throw std::out_of_range("tau(" + std::to_string(n) + ") not stored for " + label);
    return tau[std::size_t(n - 1)];
}

GaussNormalForm gauss_normal_form(long a, long b) {
    if (a == 0 && b == 0) throw std::invalid_argument("gauss_normal_form: zero has no unit orbit");
    long x = a, y = b;
    for (int k = 0; k < 4; ++k) {
        if (x > 0 && y >= 0) return {x, y, k};
        // multiply by -i
        long nx = y, ny = -x;
        x = nx;
        y = ny;
    }
    throw std::logic_error("gauss_normal_form: unreachable");
}

std::optional<double> GaussianMaassFormRecord::tau_at(long a, long b) const {
    auto nf = gauss_normal_form(a, b);
    for (const auto& e : tau) {
        if (e.a == 0 && e.b == 0) continue;
        auto se = gauss_normal_form(e.a, e.b);
        if (se.a == nf.a && se.b == nf.b) return eps_pow(eps, se.k) * eps_pow(eps, nf.k) * e.value;
    }
    return std::nullopt;
}

CatalogError::CatalogError(std::size_t l, const std::string& what)
    : std::invalid_argument("line " + std::to_string(l) + ": " + what), line(l) {}

Smoothing Smoothing::gaussian(double X) {
    if (!(X > 0.0) || !std::isfinite(X)) throw std::invalid_argument("Smoothing::gaussian: X must be positive");
    return {Kind::gaussian, X};
}

json record_to_json(const MaassFormRecord& r) {
    json j;
    j["label"] = r.label;
    j["eps"] = r.eps;
    j["t"] = r.t;
    j["alpha"] = r.alpha;
    j["tau"] = r.tau;
    if (r.central_H) j["H_half"] = *r.central_H;
    if (!r.normalization_tag.empty()) j["norm"] = r.normalization_tag;
    return j;
}

json record_to_json(const GaussianMaassFormRecord& r) {
    json j;
    j["label"] = r.label;
    j["p"] = r.p;
    j["t"] = r.t;
    j["rho1sq"] = r.rho1_sq;
    j["eps"] = r.eps;
    json tau = json::array();
    for (const auto& e : r.tau) tau.push_back(json::array({e.a, e.b, e.value}));
    j["tau"] = tau;
    if (r.central_H) j["H_half"] = *r.central_H;
    return j;
}

VerificationReport validate_hecke(const MaassFormRecord& r, double tol) {
    VerificationReport rep;
    rep.suite = "hecke:" + r.label;
    auto sign_ok = r.eps == 1 || r.eps == -1;
    rep.add_absolute("parity", {{"eps", r.eps}}, sign_ok ? 0.0 : 1.0, 0.0, 0.0, sign_ok ? "" : "eps must be +1 or -1");
    bool t_ok = r.t > 0.0 && finite(r.t);
    rep.add_absolute("spectral_t_positive", {{"t", r.t}}, t_ok ? 0.0 : 1.0, 0.0, 0.0, t_ok ? "" : "t must be > 0");
    bool a_ok = r.alpha >= 0.0 && finite(r.alpha);
    rep.add_absolute("alpha_nonnegative", {{"alpha", r.alpha}}, a_ok ? 0.0 : 1.0, 0.0, 0.0,
                     a_ok ? "" : "alpha must be >= 0");
    for (std::size_t i = 0; i < r.tau.size(); ++i)
        if (!finite(r.tau[i])) {
            rep.add_absolute("tau_finite", {{"n", i + 1}}, 1.0, 0.0, 0.0, "non-finite coefficient");
            return rep;
        }
    if (r.tau.empty()) {
        rep.add_absolute("tau_one", json::object(), 1.0, 0.0, 0.0, "no coefficients stored");
        return rep;
    }
    rep.add_absolute("tau_one", {{"n", 1}}, r.tau[0], 1.0, tol);

    // tau(m) tau(n) = sum_{d | (m, n)} tau(mn/d^2), all pairs 2 <= m <= n, mn <= N
    const long N = r.max_n();
    double worst = 0.0;
    json worst_params = json::object();
    cplx worst_l = 0.0, worst_r = 0.0;
    long count = 0;
    for (long m = 2; m * m <= N; ++m)
        for (long n = m; m * n <= N; ++n) {
            long g = std::gcd(m, n);
            double lhs = r.tau[m - 1] * r.tau[n - 1];
            double rhs = 0.0;
            for (long d = 1; d <= g; ++d)
                if (g % d == 0) rhs += r.tau[m * n / (d * d) - 1];
            double res = std::abs(lhs - rhs);
            ++count;
            if (res > tol)
                rep.add_absolute("hecke_relation", {{"m", m}, {"n", n}}, lhs, rhs, tol,
                                 "tau(" + std::to_string(m) + ") tau(" + std::to_string(n) + ")");
            if (res > worst || count == 1) {
                worst = res;
                worst_params = {{"m", m}, {"n", n}};
                worst_l = lhs;
                worst_r = rhs;
            }
        }
    if (count > 0) {
        worst_params["pairs"] = count;
        rep.add_absolute("hecke_relation_worst", worst_params, worst_l, worst_r, tol);
    }
    return rep;
}

VerificationReport validate_hecke(const GaussianMaassFormRecord& r, double tol) {
    VerificationReport rep;
    rep.suite = "hecke:" + r.label;
    bool sign_ok = r.eps == 1 || r.eps == -1;
    rep.add_absolute("parity", {{"eps", r.eps}}, sign_ok ? 0.0 : 1.0, 0.0, 0.0, sign_ok ? "" : "eps must be +1 or -1");
    bool t_ok = r.t >= 0.0 && finite(r.t);
    rep.add_absolute("spectral_t_nonnegative", {{"t", r.t}}, t_ok ? 0.0 : 1.0, 0.0, 0.0,
                     t_ok ? "" : "t must be >= 0");
    bool rho_ok = r.rho1_sq >= 0.0 && finite(r.rho1_sq);
    rep.add_absolute("rho1sq_nonnegative", {{"rho1sq", r.rho1_sq}}, rho_ok ? 0.0 : 1.0, 0.0, 0.0,
                     rho_ok ? "" : "rho1sq must be >= 0");
    if (!sign_ok) return rep;
    if (r.eps == -1 && r.central_H)
        rep.add_absolute("central_H_vanishes", {{"eps", -1}}, *r.central_H, 0.0, 0.0, "H must be 0 when eps = -1");

    for (const auto& e : r.tau) {
        if (e.a == 0 && e.b == 0) {
            rep.add_absolute("tau_nonzero_index", {{"a", 0}, {"b", 0}}, 1.0, 0.0, 0.0, "tau(0) is not defined");
            return rep;
        }
        if (!finite(e.value)) {
            rep.add_absolute("tau_finite", {{"a", e.a}, {"b", e.b}}, 1.0, 0.0, 0.0, "non-finite coefficient");
            return rep;
        }
    }

    // unit symmetries: every stored associate of an orbit must agree with
    // tau(-n) = tau(n), tau(i n) = eps tau(n)
    std::map<std::pair<long, long>, std::pair<double, GaussTau>> first;
    for (const auto& e : r.tau) {
        auto nf = gauss_normal_form(e.a, e.b);
        double rep_val = eps_pow(r.eps, nf.k) * e.value;
        auto [it, fresh] = first.emplace(std::pair{nf.a, nf.b}, std::pair{rep_val, e});
        if (fresh) continue;
        const GaussTau& f = it->second.second;
        if (std::abs(rep_val - it->second.first) > tol)
            rep.add_absolute("unit_symmetry", {{"a", e.a}, {"b", e.b}, {"associate_a", f.a}, {"associate_b", f.b}},
                             rep_val, it->second.first, tol,
                             "tau(i^k n) = eps^k tau(n) broken between stored associates");
    }

    auto table = orbit_table(r);
    if (auto one = table.find({1, 0}); one != table.end()) rep.add_absolute("tau_one", {{"a", 1}, {"b", 0}}, one->second, 1.0, tol);

    // Hecke relation over Z[i], divisors counted once per unit class
    long max_norm = 0;
    for (const auto& [k, v] : table) max_norm = std::max(max_norm, norm_of(k.first, k.second));
    auto lookup = [&](GInt n) -> std::optional<double> {
        auto nf = gauss_normal_form(n.a, n.b);
        auto it = table.find({nf.a, nf.b});
        if (it == table.end()) return std::nullopt;
        return eps_pow(r.eps, nf.k) * it->second;
    };
    std::vector<std::pair<GInt, double>> reps;
    for (const auto& [k, v] : table)
        if (norm_of(k.first, k.second) > 1) reps.push_back({GInt{k.first, k.second}, v});
    double worst = 0.0;
    json worst_params = json::object();
    cplx worst_l = 0.0, worst_r = 0.0;
    long count = 0;
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i; j < reps.size(); ++j) {
            GInt m = reps[i].first, n = reps[j].first;
            if (norm_of(m.a, m.b) * norm_of(n.a, n.b) > max_norm) continue;
            GInt mn = gmul(m, n);
            double rhs = 0.0;
            bool ok = true;
            for (GInt d : gdivisors(ggcd(m, n))) {
                auto q = gdiv_exact(mn, gmul(d, d));
                auto v = q ? lookup(*q) : std::nullopt;
                if (!v) {
                    ok = false;
                    break;
                }
                rhs += *v;
            }
            if (!ok) continue;
            double lhs = reps[i].second * reps[j].second;
            double res = std::abs(lhs - rhs);
            ++count;
            json params = {{"m", {m.a, m.b}}, {"n", {n.a, n.b}}};
            if (res > tol) rep.add_absolute("hecke_relation", params, lhs, rhs, tol);
            if (res > worst || count == 1) {
                worst = res;
                worst_params = params;
                worst_l = lhs;
                worst_r = rhs;
            }
        }
    if (count > 0) {
        worst_params["pairs"] = count;
        rep.add_absolute("hecke_relation_worst", worst_params, worst_l, worst_r, tol);
    }
    return rep;
}

Catalog load_catalog(std::istream& in, CatalogKind kind, double tol) {
    Catalog cat;
    cat.kind = kind;
    std::string text;
    std::size_t line = 0, records = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw CatalogError(line, std::string("not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CatalogError(line, "record must be a JSON object");
        ++records;
        if (kind == CatalogKind::real) {
            auto r = parse_real(j, line, cat.warnings);
            auto bad = failures(validate_hecke(r, tol));
            if (bad.empty())
                cat.real.push_back(std::move(r));
            else
                cat.quarantined.push_back({line, r.label, bad});
        } else {
            auto r = parse_gaussian(j, line, cat.warnings);
            auto bad = failures(validate_hecke(r, tol));
            if (bad.empty())
                cat.gaussian.push_back(std::move(r));
            else
                cat.quarantined.push_back({line, r.label, bad});
        }
    }
    if (records == 0) cat.warnings.push_back("catalog is empty");
    for (const auto& q : cat.quarantined)
        cat.warnings.push_back("line " + std::to_string(q.line) + ": record \"" + q.label + "\" quarantined");
    return cat;
}

Catalog load_catalog_file(const std::string& path, CatalogKind kind, double tol) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open catalog " + path);
    return load_catalog(in, kind, tol);
}

void save_catalog(std::ostream& out, const Catalog& cat) {
    if (cat.kind == CatalogKind::real)
        for (const auto& r : cat.real) out << record_to_json(r).dump() << '\n';
    else
        for (const auto& r : cat.gaussian) out << record_to_json(r).dump() << '\n';
}

std::uint64_t Catalog::hash() const {
    std::ostringstream os;
    save_catalog(os, *this);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

HeckeValue hecke_series(const MaassFormRecord& r, cplx s, Smoothing sm, std::int64_t n_limit) {
    check_s(s);
    if (s == cplx(0.5, 0.0)) {
        if (!r.central_H) throw UnavailableError("H(1/2) unavailable for " + r.label + ": no stored central value");
        return {*r.central_H, "stored", 0};
    }
    if (!(s.real() > 1.0))
        throw UnavailableError("H(s) unavailable for " + r.label + " at Re s <= 1: only the stored value at s = 1/2 is used");
    std::int64_t N = r.max_n();
    if (n_limit > 0) N = std::min(N, n_limit);
    cplx sum = 0.0;
    for (std::int64_t n = N; n >= 1; --n) {
        double w = 1.0;
        if (sm.kind == Smoothing::Kind::gaussian) w = std::exp(-std::pow(double(n) / sm.X, 2));
        sum += w * r.tau[std::size_t(n - 1)] * std::exp(-s * std::log(double(n)));
    }
    return {sum, "series", N};
}

HeckeValue hecke_series(const GaussianMaassFormRecord& r, cplx s, Smoothing sm, std::int64_t n_limit) {
    check_s(s);
    // the four associates of n sum to 2 (1 + eps) tau(n)
    if (r.eps == -1) return {0.0, "identically zero", 0};
    if (s == cplx(0.5, 0.0)) {
        if (!r.central_H) throw UnavailableError("H(1/2) unavailable for " + r.label + ": no stored central value");
        return {*r.central_H, "stored", 0};
    }
    if (!(s.real() > 1.0))
        throw UnavailableError("H(s) unavailable for " + r.label + " at Re s <= 1: only the stored value at s = 1/2 is used");
    auto table = orbit_table(r);
    std::vector<std::pair<long, double>> terms;
    for (const auto& [k, v] : table) {
        long nn = norm_of(k.first, k.second);
        if (n_limit > 0 && nn > n_limit) continue;
        terms.push_back({nn, v});
    }
    std::stable_sort(terms.begin(), terms.end(), [](auto& x, auto& y) { return x.first > y.first; });
    cplx sum = 0.0;
    for (const auto& [nn, v] : terms) {
        double w = 1.0;
        if (sm.kind == Smoothing::Kind::gaussian) w = std::exp(-double(nn) / (sm.X * sm.X));
        sum += w * v * std::exp(-s * std::log(double(nn)));
    }
    return {sum, "series", std::int64_t(terms.size())};
}

}  // namespace zm
