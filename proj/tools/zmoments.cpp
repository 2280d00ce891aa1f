// zmoments: batch verification suites and moment computations.
//
// Exit codes: 0 every check passed, 1 an identity failed (or a computation
// broke down), 2 usage error or missing/invalid input data.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zm/atkinson.hpp"
#include "zm/divisor.hpp"
#include "zm/moment4.hpp"
#include "zm/spectral_data.hpp"
#include "zm/suites.hpp"
#include "zm/weights.hpp"

using namespace zm;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

// Bad flags, missing files, records lacking a field the command needs.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;  // verify | compute | validate
    std::string target;   // suite, compute kind, or catalog kind
    std::string weight = "gaussian:1";
    std::string catalog;
    std::optional<double> tol;
    int precision = 106;
    std::string out;
    std::string format = "json";
    int jobs = 1;
    // quadrature overrides
    std::optional<double> quad_abs_tol, quad_rel_tol, truncation_radius;
    // compute-specific
    int p_max = 1;
    int atkinson_terms = 2000;
    std::int64_t shift = 1;
    double lambda = 0.0, mu = 0.0;
    std::string divisor_weight = "bump:1,2";
    std::vector<std::int64_t> n_max;
    std::string kind = "real";

    QuadratureSpec spec() const {
        QuadratureSpec s;
        s.working_precision_bits = precision;
        if (quad_abs_tol) s.abs_tol = *quad_abs_tol;
        if (quad_rel_tol) s.rel_tol = *quad_rel_tol;
        if (truncation_radius) s.truncation_radius = *truncation_radius;
        return s;
    }
    Exec exec() const { return jobs > 1 ? Exec::parallel : Exec::serial; }

    json to_json() const {
        auto q = spec();
        json j{{"command", command}, {"target", target}};
        if (command == "compute" && target != "divisor") j["weight"] = weight;
        j["catalog"] = catalog.empty() ? json(nullptr) : json(catalog);
        j["tol"] = tol ? json(*tol) : json(nullptr);
        j["precision_bits"] = precision;
        j["format"] = format;
        j["out"] = out;
        j["jobs"] = jobs;
        j["quadrature"] = {{"abs_tol", q.abs_tol},
                           {"rel_tol", q.rel_tol},
                           {"truncation_radius", q.truncation_radius},
                           {"max_subdivisions", q.max_subdivisions}};
        if (command == "compute" && target == "mean-square") j["atkinson_terms"] = atkinson_terms;
        if (command == "compute" && target == "gaussian-fourth-moment") j["p_max"] = p_max;
        if (command == "compute" && target == "divisor") {
            j["shift"] = shift;
            j["lambda"] = lambda;
            j["mu"] = mu;
            j["divisor_weight"] = divisor_weight;
            j["n_max"] = n_max;
        }
        if (command == "validate") j["kind"] = kind;
        return j;
    }
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json catalog_json(const Catalog& c, const std::string& path) {
    json q = json::array();
    for (const auto& r : c.quarantined) q.push_back({{"line", r.line}, {"label", r.label}, {"violations", r.violations}});
    return json{{"path", path},
                {"kind", c.kind == CatalogKind::real ? "real" : "gaussian"},
                {"records", c.size()},
                {"hash", hex64(c.hash())},
                {"quarantined", q},
                {"warnings", c.warnings}};
}

Catalog load(const RunConfig& cfg, CatalogKind kind) {
    if (cfg.catalog.empty())
        throw UsageError("missing --catalog (required by " + cfg.command + " " + cfg.target + ")");
    try {
        Catalog c = load_catalog_file(cfg.catalog, kind, 1e-6);
        for (const auto& q : c.quarantined) {
            std::cerr << "warning: " << cfg.catalog << " line " << q.line << ": record '" << q.label
                      << "' quarantined:";
            for (const auto& v : q.violations) std::cerr << " " << v << ";";
            std::cerr << "\n";
        }
        return c;
    } catch (const std::invalid_argument& e) {
        throw UsageError(cfg.catalog + ": " + e.what());
    }
}

void require_h_half(const Catalog& c) {
    for (const auto& r : c.real)
        if (!r.central_H) throw UsageError("record '" + r.label + "': missing field \"H_half\"");
    for (const auto& r : c.gaussian)
        if (r.eps == 1 && !r.central_H) throw UsageError("record '" + r.label + "': missing field \"H_half\"");
}

DivisorWeight parse_divisor_weight(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--divisor-weight: expected bump:lo,hi or indicator:a,b,eps");
    std::string kind = text.substr(0, colon);
    std::vector<double> v;
    std::stringstream ss(text.substr(colon + 1));
    for (std::string tok; std::getline(ss, tok, ',');) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || tok.empty()) throw UsageError("--divisor-weight: '" + tok + "' is not a number");
        v.push_back(x);
    }
    try {
        if (kind == "bump" && v.size() == 2) return bump_weight(v[0], v[1]);
        if (kind == "indicator" && v.size() == 3) return mollified_indicator(v[0], v[1], v[2]);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--divisor-weight: ") + e.what());
    }
    throw UsageError("--divisor-weight: expected bump:lo,hi or indicator:a,b,eps");
}

Weight resolve_weight(const RunConfig& cfg) {
    try {
        return parse_weight(cfg.weight);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--weight: ") + e.what());
    }
}

struct Outcome {
    json result;
    std::string csv;
    bool pass = true;
};

void print_checks(const VerificationReport& rep) {
    for (const auto& c : rep.checks)
        std::printf("%s  %-34s residual=%.3e  tol=%.1e  %s\n", c.pass ? "PASS" : "FAIL", c.identity.c_str(),
                    c.residual, c.tolerance, c.params.dump().c_str());
    std::size_t failed = 0;
    for (const auto& c : rep.checks) failed += !c.pass;
    std::printf("%zu checks, %zu failed\n", rep.checks.size(), failed);
}

Outcome run_verify(const RunConfig& cfg) {
    SuiteOptions opt;
    opt.spec = cfg.spec();
    opt.tol = cfg.tol;
    opt.exec = cfg.exec();
    auto rep = run_suite(cfg.target, opt);
    print_checks(rep);
    return {rep.to_json(), rep.to_csv(), rep.all_pass()};
}

Outcome compute_mean_square(const RunConfig& cfg) {
    Weight g = resolve_weight(cfg);
    auto spec = cfg.spec();
    double direct = mean_value_direct({}, g, spec);
    AtkinsonBreakdown b = atkinson_explicit(g, cfg.atkinson_terms, spec);
    double tol = cfg.tol.value_or(1e-6);
    double residual = std::fabs(direct - b.total) / std::fabs(direct);
    json j = b.to_json();
    j["direct"] = direct;
    j["cross_check"] = {{"residual", residual}, {"tolerance", tol}, {"pass", residual <= tol}};
    std::printf("direct %.17g\nexplicit %.17g\nresidual %.3e (tol %.1e)\n", direct, b.total, residual, tol);
    std::ostringstream csv;
    csv.precision(17);
    csv << "# direct=" << direct << "\n# explicit=" << b.total << "\n# residual=" << residual << "\n" << b.to_csv();
    return {j, csv.str(), residual <= tol};
}

Outcome compute_fourth_moment(const RunConfig& cfg) {
    Weight g = resolve_weight(cfg);
    Catalog c = load(cfg, CatalogKind::real);
    require_h_half(c);
    auto rep = moment_report(c, g, cfg.spec(), cfg.exec());
    json j = rep.to_json();
    j["catalog"] = catalog_json(c, cfg.catalog);
    std::printf("direct %.17g\ncuspidal %.17g\neisenstein %.17g\nresidual %.17g\n", rep.direct, rep.cuspidal,
                rep.eisenstein, rep.residual);
    return {j, rep.to_csv(), true};
}

Outcome compute_gaussian(const RunConfig& cfg) {
    Weight g = resolve_weight(cfg);
    if (cfg.p_max < 0) throw UsageError("--p-max must be >= 0");
    Catalog c = load(cfg, CatalogKind::gaussian);
    require_h_half(c);
    auto terms = gaussian_moment_terms(c, g, cfg.p_max, cfg.spec(), {}, cfg.exec());
    json j = terms.to_json();
    j["weight_id"] = g.id;
    j["catalog"] = catalog_json(c, cfg.catalog);
    std::ostringstream csv;
    csv.precision(17);
    csv << "part,label,value\ncuspidal,," << terms.cuspidal << "\neisenstein,," << terms.eisenstein << "\n";
    for (const auto& f : terms.per_form) csv << "form," << f.label << "," << f.contribution << "\n";
    for (const auto& e : terms.eisenstein_per_p) csv << "eisenstein_p," << e.p << "," << e.value << "\n";
    std::printf("cuspidal %.17g\neisenstein %.17g\n", terms.cuspidal, terms.eisenstein);
    return {j, csv.str(), true};
}

Outcome compute_divisor(const RunConfig& cfg) {
    DivisorProblem prob;
    prob.lambda = cfg.lambda;
    prob.mu = cfg.mu;
    prob.shift_f = cfg.shift;
    prob.W = parse_divisor_weight(cfg.divisor_weight);
    try {
        prob.validate_spectral();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    Catalog c = load(cfg, CatalogKind::real);
    std::vector<std::int64_t> sweep = cfg.n_max;
    if (sweep.empty()) {
        auto end = std::int64_t(std::ceil(prob.W.hi * double(prob.shift_f)));
        sweep = {std::max<std::int64_t>(1, end / 2), end, 2 * end};
    }
    DivisorReport rep;
    try {
        rep = divisor_report(c, prob, sweep, cfg.spec(), {}, cfg.exec());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());  // a record the kernel cannot use, named in the message
    }
    json j = rep.to_json();
    j["catalog"] = catalog_json(c, cfg.catalog);
    for (const auto& b : rep.brute_force)
        std::printf("brute force n<=%lld %.17g%s\n", static_cast<long long>(b.n_max), b.value.real(),
                    b.truncated ? " (truncated)" : "");
    std::printf("cuspidal %.17g %+.17gi\n", rep.cuspidal.total.real(), rep.cuspidal.total.imag());
    return {j, rep.to_csv(), true};
}

Outcome run_validate(const RunConfig& cfg) {
    if (cfg.catalog.empty()) throw UsageError("missing --catalog (required by validate)");
    CatalogKind kind = cfg.kind == "gaussian" ? CatalogKind::gaussian : CatalogKind::real;
    Catalog c;
    try {
        c = load_catalog_file(cfg.catalog, kind, cfg.tol.value_or(1e-6));
    } catch (const std::invalid_argument& e) {
        throw UsageError(cfg.catalog + ": " + e.what());
    }
    json j = catalog_json(c, cfg.catalog);
    std::ostringstream csv;
    csv << "line,label,violation\n";
    for (const auto& q : c.quarantined)
        for (const auto& v : q.violations) csv << q.line << ',' << q.label << ",\"" << v << "\"\n";
    std::printf("%zu records loaded, %zu quarantined\n", c.size(), c.quarantined.size());
    for (const auto& q : c.quarantined) std::printf("QUARANTINED line %zu: %s\n", q.line, q.label.c_str());
    return {j, csv.str(), c.quarantined.empty()};
}

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
    if (!f) throw UsageError("cannot write " + path);
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--precision", cfg.precision, "working precision in bits (53..106)")->check(CLI::Range(53, 106));
    sub->add_option("--tol", cfg.tol, "tolerance override")->check(CLI::PositiveNumber);
    sub->add_option("--catalog", cfg.catalog, "JSONL catalog of Maass forms");
    sub->add_option("--weight", cfg.weight, "test weight, gaussian:<delta>");
    sub->add_option("--out", cfg.out, "report path (default zmoments_<target>.<format>)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs", cfg.jobs, "OpenMP threads")->check(CLI::PositiveNumber);
    sub->add_option("--quad-abs-tol", cfg.quad_abs_tol, "quadrature absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--quad-rel-tol", cfg.quad_rel_tol, "quadrature relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--truncation-radius", cfg.truncation_radius, "cut of the t-line")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Verification suites and moment computations"};
    app.set_version_flag("--version", std::string(ZM_VERSION));
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file holding option values; unknown keys are an error");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    auto* verify = app.add_subcommand("verify", "run an identity suite");
    verify->add_option("--suite", cfg.target, "suite name")->required()->check(CLI::IsMember(suites));
    add_common(verify, cfg);

    auto* compute = app.add_subcommand("compute", "compute a moment or divisor-sum decomposition");
    compute->add_option("what", cfg.target, "mean-square | fourth-moment | gaussian-fourth-moment | divisor")
        ->required()
        ->check(CLI::IsMember({"mean-square", "fourth-moment", "gaussian-fourth-moment", "divisor"}));
    add_common(compute, cfg);
    compute->add_option("--p-max", cfg.p_max, "Grossencharacter range |p| <= p_max (gaussian-fourth-moment)");
    compute->add_option("--atkinson-terms", cfg.atkinson_terms, "cap on the divisor tail (mean-square)")
        ->check(CLI::PositiveNumber);
    compute->add_option("--shift", cfg.shift, "shift f (divisor)")->check(CLI::PositiveNumber);
    compute->add_option("--lambda", cfg.lambda, "lambda (divisor)");
    compute->add_option("--mu", cfg.mu, "mu (divisor)");
    compute->add_option("--divisor-weight", cfg.divisor_weight, "bump:lo,hi or indicator:a,b,eps (divisor)");
    compute->add_option("--n-max", cfg.n_max, "brute-force cut-offs (divisor)")->delimiter(',');

    auto* validate = app.add_subcommand("validate", "load a catalog and report quarantined records");
    add_common(validate, cfg);
    validate->add_option("--kind", cfg.kind, "real or gaussian")->check(CLI::IsMember({"real", "gaussian"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }
    cfg.command = verify->parsed() ? "verify" : compute->parsed() ? "compute" : "validate";
    if (cfg.command == "validate") cfg.target = cfg.kind;
    if (cfg.out.empty()) cfg.out = "zmoments_" + cfg.target + "." + cfg.format;

    omp_set_num_threads(cfg.jobs);
    auto started = std::chrono::steady_clock::now();
    std::string started_utc = utc_now();

    Outcome res;
    int code = exit_pass;
    try {
        if (cfg.command == "verify")
            res = run_verify(cfg);
        else if (cfg.command == "validate")
            res = run_validate(cfg);
        else if (cfg.target == "mean-square")
            res = compute_mean_square(cfg);
        else if (cfg.target == "fourth-moment")
            res = compute_fourth_moment(cfg);
        else if (cfg.target == "gaussian-fourth-moment")
            res = compute_gaussian(cfg);
        else
            res = compute_divisor(cfg);
        code = res.pass ? exit_pass : exit_fail;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        // numerical breakdown: reported like a failed identity
        std::cerr << "error: " << e.what() << "\n";
        res.result = json{{"error", e.what()}};
        res.csv = std::string("error\n\"") + e.what() + "\"\n";
        res.pass = false;
        code = exit_fail;
    }

    const char* status = res.pass ? "pass" : "fail";
    std::string text;
    if (cfg.format == "json") {
        json doc{{"tool", "zmoments"},
                 {"version", ZM_VERSION},
                 {"precision_bits", cfg.precision},
                 {"config", cfg.to_json()},
                 {"status", status},
                 {"exit_code", code},
                 {"result", res.result}};
        text = doc.dump(2) + "\n";
    } else {
        text = "# tool=zmoments\n# version=" + std::string(ZM_VERSION) +
               "\n# precision_bits=" + std::to_string(cfg.precision) + "\n# config=" + cfg.to_json().dump() +
               "\n# status=" + status + "\n" + res.csv;
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    try {
        write_file(cfg.out, text);
        json meta{{"report", cfg.out}, {"started_utc", started_utc}, {"elapsed_seconds", elapsed}};
        write_file(cfg.out + ".meta.json", meta.dump(2) + "\n");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    std::printf("%s: report written to %s\n", status, cfg.out.c_str());
    return code;
}
