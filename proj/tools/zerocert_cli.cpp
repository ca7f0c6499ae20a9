// zerocert command line: problem definitions in, human-readable reports and
// machine-checkable certificates out.
//
//   zerocert delta     --config problem.cfg [--out cert.txt]
//   zerocert certify   --config problem.cfg [--out cert.txt]
//   zerocert search    --config problem.cfg [--out cert.txt]
//   zerocert example11 --config problem.cfg [--out cert.txt] [--csv table.csv]
//   zerocert gap       --config problem.cfg [--out cert.txt]
//
// Exit codes: 0 success / certificate emitted, 2 sound "no certificate"
// outcome (separation or empty search), 1 error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zerocert/certificate_io.hpp"
#include "zerocert/certify.hpp"
#include "zerocert/config.hpp"
#include "zerocert/delta.hpp"
#include "zerocert/minimax.hpp"

namespace {

using namespace zerocert;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::string csv_path;
    int resolution = -1;
    long long seed = -1;
    std::vector<std::string> tol_overrides;
    bool quiet = false;
};

ProblemConfig load_config(const CliOptions& opt) {
    ProblemConfig cfg = parse_config(read_file(opt.config_path));
    if (opt.resolution > 0) cfg.resolution = opt.resolution;
    if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
    for (const std::string& ov : opt.tol_overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("--tol expects NAME=VALUE, got '" + ov + "'");
        cfg.tol_overrides[ov.substr(0, eq)] = std::stod(ov.substr(eq + 1));
    }
    (void)cfg.tolerances();  // validate override names early
    return cfg;
}

void emit(const CertificateFile& cert, const CliOptions& opt) {
    const std::string text = serialize_certificate(cert);
    if (!opt.out_path.empty()) write_file_atomic(opt.out_path, text);
    if (!opt.quiet) std::cout << text;
}

ConvexBody shifted_body(const ConvexBody& body, double off) {
    const int d = body_dim(body);
    Vec t(d, 0.0);
    t[0] = off;
    if (const auto* s = std::get_if<Segment>(&body)) return Segment{add(s->a, t), add(s->b, t)};
    if (const auto* p = std::get_if<Polytope>(&body)) {
        Polytope out;
        for (const Vec& v : p->vertices) out.vertices.push_back(add(v, t));
        return out;
    }
    const auto& b = std::get<BallBody>(body);
    return BallBody{add(b.center, t), b.radius};
}

ConvexBody rotated_body(const ConvexBody& body) {
    // fixed Givens rotation in the first two coordinates
    const double c = 0.8, s = 0.6;
    auto rot = [&](const Vec& v) {
        Vec out = v;
        out[0] = c * v[0] - s * v[1];
        out[1] = s * v[0] + c * v[1];
        return out;
    };
    if (const auto* sg = std::get_if<Segment>(&body)) return Segment{rot(sg->a), rot(sg->b)};
    if (const auto* p = std::get_if<Polytope>(&body)) {
        Polytope out;
        for (const Vec& v : p->vertices) out.vertices.push_back(rot(v));
        return out;
    }
    const auto& b = std::get<BallBody>(body);
    return BallBody{rot(b.center), b.radius};
}

int run_delta(const CliOptions& opt) {
    ProblemConfig cfg = load_config(opt);
    CertificateFile cert;
    cert.command = "delta";
    cert.timestamp = utc_timestamp();
    cert.config = cfg;
    const ConvexBody& body = cfg.body_or_region();
    cert.delta = delta_bounds(body, cfg.resolution);
    emit(cert, opt);
    if (!opt.quiet) {
        std::cout << "# delta bracket [" << fmt_double(cert.delta->lower) << ", "
                  << fmt_double(cert.delta->upper) << "]\n";
        // invariance self-checks: the bracket must not move under a
        // translation or a rotation of the body
        const DeltaBounds moved = delta_bounds(shifted_body(body, 1.0), cfg.resolution);
        const DeltaBounds rot = delta_bounds(rotated_body(body), cfg.resolution);
        const double dev = std::max(
            std::max(std::abs(moved.lower - cert.delta->lower), std::abs(moved.upper - cert.delta->upper)),
            std::max(std::abs(rot.lower - cert.delta->lower), std::abs(rot.upper - cert.delta->upper)));
        std::cout << "# invariance self-check (translate + rotate): max bracket deviation "
                  << fmt_double(dev) << (dev <= 1e-6 ? " ok" : " SUSPECT") << "\n";
        std::cout << "# lower witness: " << cert.delta->lower_witness.points.size()
                  << " interpolable points, upper witness kind "
                  << (cert.delta->upper_kind == UpperWitnessKind::recenter       ? "recenter"
                      : cert.delta->upper_kind == UpperWitnessKind::extension    ? "extension"
                      : cert.delta->upper_kind == UpperWitnessKind::exact_segment ? "exact_segment"
                                                                                  : "trivial")
                  << "\n";
    }
    return 0;
}

int run_certify(const CliOptions& opt) {
    ProblemConfig cfg = load_config(opt);
    const OperatorHandle op = build_operator(cfg);
    CertificateFile cert;
    cert.command = "certify";
    cert.timestamp = utc_timestamp();
    cert.config = cfg;
    cert.certify =
        certify_near_zero(op, cfg.body_or_region(), cfg.resolution, cfg.tolerances().membership);
    emit(cert, opt);
    if (cert.certify->status == CertifyStatus::no_certificate) {
        if (!opt.quiet) std::cout << "# no certificate: sampled image hull excludes 0\n";
        return 2;
    }
    if (!opt.quiet) {
        std::cout << "# claimed bound on inf |Phi|: "
                  << fmt_double(cert.certify->certificate->claimed_bound);
        if (cert.certify->certificate->l_provenance == LProvenance::user_asserted)
            std::cout << " (conditional on the asserted Lipschitz constant)";
        std::cout << "\n";
    }
    return 0;
}

int run_search(const CliOptions& opt) {
    ProblemConfig cfg = load_config(opt);
    const OperatorHandle op = build_operator(cfg);
    if (!cfg.region) throw ConfigError("search needs a 'region' section");
    CertificateFile cert;
    cert.command = "search";
    cert.timestamp = utc_timestamp();
    cert.config = cfg;
    cert.search = search_small_delta(op, *cfg.region, cfg.budget, cfg.tolerances().membership);
    emit(cert, opt);
    if (!cert.search->found) {
        if (!opt.quiet) std::cout << "# empty result: no hull-containing candidate found\n";
        return 2;
    }
    if (!opt.quiet)
        std::cout << "# best delta upper bound: " << fmt_double(cert.search->delta_upper) << "\n";
    return 0;
}

int run_example11(const CliOptions& opt) {
    ProblemConfig cfg = load_config(opt);
    CertificateFile cert;
    cert.command = "example11";
    cert.timestamp = utc_timestamp();
    cert.config = cfg;
    cert.example11 = example11_table(cfg.n_max);
    emit(cert, opt);
    if (!opt.csv_path.empty()) write_file_atomic(opt.csv_path, example11_csv(*cert.example11));
    return 0;
}

int run_gap(const CliOptions& opt) {
    ProblemConfig cfg = load_config(opt);
    const OperatorHandle op = build_operator(cfg);
    if (!op.known_grad_lipschitz)
        throw ConfigError("gap needs an operator with a Lipschitz constant (or L_override)");
    const ConvexBody& body = cfg.body_or_region();
    const DeltaLowerOnGrid lo = delta_lower_auto(body, cfg.resolution);
    CertificateFile cert;
    cert.command = "gap";
    cert.timestamp = utc_timestamp();
    cert.config = cfg;
    cert.gap_check =
        gap_inequality_check(op, body, lo.result.witness, lo.grid, *op.known_grad_lipschitz);
    cert.convexity_check =
        convexity_mechanism_check(op, body, *op.known_grad_lipschitz, 1000, cfg.seed);
    emit(cert, opt);
    if (!opt.quiet)
        std::cout << "# gap inequality " << (cert.gap_check->holds ? "holds" : "VIOLATED")
                  << ", convexity violations: " << cert.convexity_check->violations << "\n";
    return cert.gap_check->holds && cert.convexity_check->violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified bounds for the convexity defect and near-zero certificates"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "problem definition file")->required();
        sub->add_option("--out", opt.out_path, "write the certificate to this path");
        sub->add_option("--resolution", opt.resolution, "override the config resolution");
        sub->add_option("--seed", opt.seed, "override the config seed");
        sub->add_option("--tol", opt.tol_overrides, "tolerance override NAME=VALUE (repeatable)");
        sub->add_flag("--quiet", opt.quiet, "suppress stdout report");
    };

    CLI::App* cmd_delta = app.add_subcommand("delta", "two-sided bounds for the convexity defect");
    add_common(cmd_delta);
    CLI::App* cmd_certify = app.add_subcommand("certify", "near-zero certificate for the operator");
    add_common(cmd_certify);
    CLI::App* cmd_search = app.add_subcommand("search", "search for small-defect hull-containing bodies");
    add_common(cmd_search);
    CLI::App* cmd_example11 = app.add_subcommand("example11", "circle-operator table");
    add_common(cmd_example11);
    cmd_example11->add_option("--csv", opt.csv_path, "also write the table as CSV");
    CLI::App* cmd_gap = app.add_subcommand("gap", "duality-gap inequality and convexity checks");
    add_common(cmd_gap);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_delta->parsed()) return run_delta(opt);
        if (cmd_certify->parsed()) return run_certify(opt);
        if (cmd_search->parsed()) return run_search(opt);
        if (cmd_example11->parsed()) return run_example11(opt);
        if (cmd_gap->parsed()) return run_gap(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
