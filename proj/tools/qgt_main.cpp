// Command-line campaign runner for the deformed Golden-Thompson verifier.
//
// Subcommands:
//   verify <suite>   run an inequality campaign, emit a JSON/CSV report
//   sweep            q-sweep of the trace inequality gap for one seeded pair
//   replay <path>    re-run a stored trial record and compare
//   selftest         scalar-oracle and finite-difference cross-checks
//
// Exit codes: 0 = all claims hold, 1 = violation or mismatch, 2 = bad
// config or I/O.  QGT_THREADS overrides the worker count.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgt/qgt.hpp"

namespace {

using namespace qgt;

int env_threads_override(int configured) {
    if (const char* env = std::getenv("QGT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
        std::cerr << "warning: ignoring invalid QGT_THREADS value '" << env << "'\n";
    }
    return configured;
}

bool write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << text;
    return static_cast<bool>(f);
}

void print_cell_summary(const CampaignResult& result) {
    for (const CellReport& c : result.cells) {
        std::cerr << "  " << suite_name(c.suite) << "  q=" << format_double(c.q)
                  << "  dim=" << c.dim << "  min_margin=" << format_double(c.min_margin)
                  << "  violations=" << c.violations << "\n";
    }
    std::cerr << (result.pass ? "PASS" : "FAIL") << ": " << result.trials.size()
              << " trials, " << result.failures.size() << " violations\n";
}

int export_records(const std::vector<ReplayableTrial>& records, const std::string& dir,
                   const char* stem) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create directory " << dir << ": " << ec.message()
                  << "\n";
        return 2;
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string path =
            (std::filesystem::path(dir) / (std::string(stem) + "_" + std::to_string(i) + ".json"))
                .string();
        if (!write_text_file(path, to_json(records[i]).dump(2) + "\n")) {
            std::cerr << "error: cannot write " << path << "\n";
            return 2;
        }
    }
    return 0;
}

int run_verify(const CampaignConfig& cfg_in, const std::string& out_path,
               const std::string& export_trials_dir, const std::string& export_failures_dir) {
    CampaignConfig cfg = cfg_in;
    cfg.threads = env_threads_override(cfg.threads);
    cfg.keep_all_inputs = !export_trials_dir.empty();

    const CampaignResult result = run_campaign(cfg);

    std::string payload;
    if (cfg.output_format == OutputFormat::json) {
        payload = report_to_string(result);
    } else {
        std::ostringstream os;
        write_csv(result, os);
        payload = os.str();
    }

    if (!out_path.empty()) {
        if (!write_text_file(out_path, payload)) {
            std::cerr << "error: cannot write report to " << out_path << "\n";
            return 2;
        }
        std::cerr << "report written to " << out_path << "\n";
    } else {
        std::cout << payload;
    }

    if (!export_failures_dir.empty()) {
        const int rc = export_records(result.failures, export_failures_dir, "failure");
        if (rc != 0) return rc;
    }
    if (!export_trials_dir.empty()) {
        const int rc = export_records(result.kept, export_trials_dir, "trial");
        if (rc != 0) return rc;
    }

    print_cell_summary(result);
    return result.pass ? 0 : 1;
}

int run_sweep(std::uint64_t seed, std::optional<std::uint64_t> a_seed,
              std::optional<std::uint64_t> b_seed, std::vector<double> grid, int dim,
              std::pair<double, double> range, const std::string& out_path) {
    if (grid.empty()) grid = {1.0, 1.1, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0};
    const std::uint64_t sa = a_seed ? *a_seed : derive_seed(seed, 1);
    const std::uint64_t sb = b_seed ? *b_seed : derive_seed(seed, 2);

    const auto rows = sweep_gap(sa, sb, grid, dim, range);
    std::ostringstream os;
    write_sweep_csv(rows, os);
    if (!out_path.empty()) {
        if (!write_text_file(out_path, os.str())) {
            std::cerr << "error: cannot write sweep to " << out_path << "\n";
            return 2;
        }
        std::cerr << "sweep written to " << out_path << "\n";
    } else {
        std::cout << os.str();
    }
    return 0;
}

int run_replay(const std::string& path) {
    const ReplayResult r = replay_file(path);
    std::cout << "suite=" << suite_name(r.recorded.suite) << " q=" << format_double(r.recorded.q)
              << " dim=" << r.recorded.dim << "\n";
    std::cout << "recorded:   lhs=" << format_double(r.recorded.lhs)
              << " rhs=" << format_double(r.recorded.rhs)
              << " holds=" << (r.recorded.holds ? "true" : "false") << "\n";
    std::cout << "recomputed: lhs=" << format_double(r.recomputed.lhs)
              << " rhs=" << format_double(r.recomputed.rhs)
              << " holds=" << (r.recomputed.holds ? "true" : "false") << "\n";
    std::cout << "delta:      lhs=" << format_double(r.lhs_delta)
              << " rhs=" << format_double(r.rhs_delta) << "\n";
    std::cout << (r.reproduced ? "REPRODUCED" : "MISMATCH") << "\n";
    return r.reproduced ? 0 : 1;
}

// Direct pow/exp evaluation, independent of the library kernels.
std::pair<double, double> scalar_oracle_sides(double a, double b, double q) {
    auto qexp = [](double x, double qq) {
        return qq == 1.0 ? std::exp(x) : std::pow(x * (qq - 1.0) + 1.0, 1.0 / (qq - 1.0));
    };
    const double lhs = qexp(a + b, q);
    const double rhs = std::pow(qexp(a, q), 2.0 - q) * (a * (q - 1.0) + qexp(b, q));
    return {lhs, rhs};
}

int run_selftest(std::uint64_t seed) {
    int failures = 0;
    auto report = [&](const char* name, bool ok, double worst) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name
                  << "  (worst deviation " << format_double(worst) << ")\n";
        if (!ok) ++failures;
    };

    // 1. Scalar oracle vs the dim-1 matrix path.
    {
        double worst = 0.0;
        for (double q : {1.0, 1.2, 1.5, 1.9, 2.0, 2.4, 3.0})
            for (double a : {0.1, 1.0, 5.0, 20.0})
                for (double b : {0.2, 1.0, 9.0}) {
                    const auto [slhs, srhs] = scalar_oracle_sides(a, b, q);
                    const auto [mlhs, mrhs] =
                        theorem1_sides(PositiveDefiniteMatrix(SymmetricMatrix{{a}}),
                                       PositiveDefiniteMatrix(SymmetricMatrix{{b}}),
                                       DeformationParameter(q));
                    worst = std::max(worst, std::abs(slhs - mlhs) / std::max(1.0, std::abs(slhs)));
                    worst = std::max(worst, std::abs(srhs - mrhs) / std::max(1.0, std::abs(srhs)));
                }
        report("scalar oracle agreement (dim 1)", worst <= 1e-12, worst);
    }

    // 2. Frechet derivative vs central finite differences.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const std::uint64_t s = derive_seed(seed, 100 + static_cast<std::uint64_t>(trial));
            const DeformationParameter q(1.2 + 0.35 * (trial % 5));
            const auto a = random_pd(RandomEnsembleSpec(4, 0.2, 3.0, derive_seed(s, 1)));
            SplitMix64 rng(derive_seed(s, 2));
            const SymmetricMatrix b = random_symmetric(4, -1.0, 1.0, rng);
            const SymmetricMatrix d = frechet_derivative(a.decomposition(), QExpFun{q}, b);
            const double h = constants::fd_step;
            const SymmetricMatrix fd =
                (1.0 / (2.0 * h)) *
                (apply_function(a.base() + h * b, [&](double x) { return q_exp(x, q); }) -
                 apply_function(a.base() + (-h) * b, [&](double x) { return q_exp(x, q); }));
            worst = std::max(worst, max_abs(d - fd) / std::max(1.0, max_abs(d)));
        }
        report("Frechet derivative vs finite differences", worst <= 1e-6, worst);
    }

    // 3. Trace-derivative identity Tr d f(A)B = Tr f'(A)B.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const std::uint64_t s = derive_seed(seed, 200 + static_cast<std::uint64_t>(trial));
            const DeformationParameter q(1.3 + 0.4 * (trial % 4));
            const auto a = random_pd(RandomEnsembleSpec(4, 0.2, 5.0, derive_seed(s, 1)));
            SplitMix64 rng(derive_seed(s, 2));
            const SymmetricMatrix b = random_symmetric(4, -1.0, 1.0, rng);
            worst = std::max(worst, trace_derivative_residual(a.base(), QLogFun{q}, b));
        }
        report("trace-derivative identity", worst <= 1e-9, worst);
    }

    // 4. Directional derivative of phi vs a 1-D finite difference.
    {
        double worst = 0.0;
        for (double qv : {1.0, 1.5, 2.5}) {
            const DeformationParameter q(qv);
            const std::uint64_t s = derive_seed(seed, 300 + static_cast<std::uint64_t>(qv * 10));
            const IsometryFamily fam =
                make_isometry_family(2, 3, derive_seed(s, 1), Completeness::exact);
            const FunctionalPoint x = random_point(2, 3, 0.2, 5.0, derive_seed(s, 2));
            const FunctionalPoint hp = random_point(2, 3, 0.2, 5.0, derive_seed(s, 3));
            const double analytic = phi_directional_derivative(fam, x, hp, q);
            const double t = constants::fd_step;
            auto shifted = [&](double tt) {
                std::vector<PositiveDefiniteMatrix> ms;
                for (int i = 0; i < x.size(); ++i)
                    ms.emplace_back(x.matrix(i).base() + tt * hp.matrix(i).base());
                return phi(fam, FunctionalPoint(ms), q);
            };
            const double fd = (shifted(t) - shifted(-t)) / (2.0 * t);
            worst = std::max(worst, std::abs(analytic - fd) / std::max(1.0, std::abs(analytic)));
        }
        report("phi directional derivative vs finite difference", worst <= 1e-6, worst);
    }

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deformed Golden-Thompson inequality verifier"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run an inequality campaign");
    std::string suite_arg = "all";
    CampaignConfig cfg;
    std::optional<double> q_single;
    std::string format_arg = "json";
    std::string out_path, export_trials_dir, export_failures_dir;
    std::optional<double> tol_scale;
    std::vector<double> eig_range;
    verify->add_option("suite", suite_arg,
                       "suite: theorem1|classical_gt|phi_concavity|carlen_lieb|"
                       "corollary6|differential|decoupling|entropy|all");
    verify->add_option("--q", q_single, "single q value (overrides --q-grid)");
    verify->add_option("--q-grid", cfg.q_grid, "q grid in [1,3]");
    verify->add_option("--dim", cfg.dims, "matrix dimensions (repeatable)");
    verify->add_option("--trials", cfg.trials_per_cell, "trials per (q, dim) cell");
    verify->add_option("--seed", cfg.seed, "campaign seed");
    verify->add_option("--eig-range", eig_range, "eigenvalue range: min max")
        ->expected(2);
    verify->add_option("--tol-scale", tol_scale,
                       "relative tolerance scale (default: per-suite)");
    verify->add_option("--format", format_arg, "report format: json|csv");
    verify->add_option("--out", out_path, "report output path (default: stdout)");
    verify->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
    verify->add_option("--export-trials", export_trials_dir,
                       "write every trial with inputs into this directory");
    verify->add_option("--export-failures", export_failures_dir,
                       "write failing trials with inputs into this directory");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "q-sweep of the trace inequality gap");
    std::uint64_t sweep_seed = 424242;
    std::optional<std::uint64_t> a_seed, b_seed;
    std::vector<double> sweep_grid;
    int sweep_dim = 3;
    std::vector<double> sweep_range;
    std::string sweep_out;
    sweep->add_option("--seed", sweep_seed, "base seed for the (A, B) pair");
    sweep->add_option("--a-seed", a_seed, "explicit seed for A");
    sweep->add_option("--b-seed", b_seed, "explicit seed for B");
    sweep->add_option("--q-grid", sweep_grid, "q grid in [1,3]");
    sweep->add_option("--dim", sweep_dim, "matrix dimension");
    sweep->add_option("--eig-range", sweep_range, "eigenvalue range: min max")->expected(2);
    sweep->add_option("--out", sweep_out, "CSV output path (default: stdout)");

    // replay
    auto* replay = app.add_subcommand("replay", "re-run a stored trial record");
    std::string replay_path;
    replay->add_option("path", replay_path, "trial record JSON file")->required();

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the cross-check oracles");
    std::uint64_t selftest_seed = 424242;
    selftest->add_option("--seed", selftest_seed, "seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) {
            const auto suite = suite_from_name(suite_arg);
            if (!suite) {
                std::cerr << "error: unknown suite '" << suite_arg << "'\n";
                return 2;
            }
            cfg.suite = *suite;
            if (q_single) cfg.q_grid = {*q_single};
            if (!eig_range.empty()) cfg.eigenvalue_range = {eig_range[0], eig_range[1]};
            cfg.tolerance_scale = tol_scale;
            if (format_arg == "json") {
                cfg.output_format = OutputFormat::json;
            } else if (format_arg == "csv") {
                cfg.output_format = OutputFormat::csv;
            } else {
                std::cerr << "error: unknown format '" << format_arg << "'\n";
                return 2;
            }
            return run_verify(cfg, out_path, export_trials_dir, export_failures_dir);
        }
        if (sweep->parsed()) {
            std::pair<double, double> range = {0.05, 20.0};
            if (!sweep_range.empty()) range = {sweep_range[0], sweep_range[1]};
            return run_sweep(sweep_seed, a_seed, b_seed, sweep_grid, sweep_dim, range,
                             sweep_out);
        }
        if (replay->parsed()) return run_replay(replay_path);
        if (selftest->parsed()) return run_selftest(selftest_seed);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
