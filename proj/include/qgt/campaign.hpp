#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qgt/inequalities.hpp"
#include "qgt/random.hpp"
#include "qgt/version.hpp"

// Campaign runner: seeded trial generation per suite, deterministic
// fan-out over a worker pool, per-cell aggregation, JSON/CSV reports and
// self-contained failure records for replay.
//
// Per-trial seeds derive from (campaign seed, suite id, q index, dim index,
// trial index) through the SplitMix64 finalizer, so any trial can be
// regenerated without running its predecessors.

namespace qgt {

enum class Suite {
    theorem1,
    classical_gt,
    phi_concavity,
    carlen_lieb,
    corollary6,
    differential,
    decoupling,
    entropy,
    all,
};

inline constexpr std::string_view suite_name(Suite s) {
    switch (s) {
        case Suite::theorem1: return "theorem1";
        case Suite::classical_gt: return "classical_gt";
        case Suite::phi_concavity: return "phi_concavity";
        case Suite::carlen_lieb: return "carlen_lieb";
        case Suite::corollary6: return "corollary6";
        case Suite::differential: return "differential";
        case Suite::decoupling: return "decoupling";
        case Suite::entropy: return "entropy";
        case Suite::all: return "all";
    }
    return "unknown";
}

inline std::optional<Suite> suite_from_name(std::string_view name) {
    for (Suite s : {Suite::theorem1, Suite::classical_gt, Suite::phi_concavity,
                    Suite::carlen_lieb, Suite::corollary6, Suite::differential,
                    Suite::decoupling, Suite::entropy, Suite::all})
        if (suite_name(s) == name) return s;
    return std::nullopt;
}

// Stable ids for seed derivation; never renumber.
inline constexpr std::uint64_t suite_id(Suite s) {
    switch (s) {
        case Suite::theorem1: return 1;
        case Suite::classical_gt: return 2;
        case Suite::phi_concavity: return 3;
        case Suite::carlen_lieb: return 4;
        case Suite::corollary6: return 5;
        case Suite::differential: return 6;
        case Suite::decoupling: return 7;
        case Suite::entropy: return 8;
        case Suite::all: return 0;
    }
    return 0;
}

enum class OutputFormat { json, csv };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CampaignConfig {
    Suite suite = Suite::all;
    std::vector<double> q_grid = {1.0, 1.1, 1.5, 1.9, 2.0, 2.1, 2.5, 3.0};
    std::vector<int> dims = {1, 2, 3, 5, 8};
    int trials_per_cell = 200;
    std::uint64_t seed = 424242;
    std::pair<double, double> eigenvalue_range = {0.05, 20.0};
    std::optional<double> tolerance_scale; // empty -> per-suite defaults
    OutputFormat output_format = OutputFormat::json;

    // Execution details; not part of the report.
    int threads = 0; // 0 = auto
    bool keep_all_inputs = false;
};

// Default slack per suite, as a multiple of max(1, |lhs|, |rhs|).
inline double default_tolerance(Suite s) {
    switch (s) {
        case Suite::corollary6:
        case Suite::differential: return 1e-8;
        case Suite::entropy: return 1e-10;
        default: return constants::default_tolerance_scale;
    }
}

inline double resolve_tolerance(Suite s, const CampaignConfig& cfg) {
    return cfg.tolerance_scale ? *cfg.tolerance_scale : default_tolerance(s);
}

inline void validate(const CampaignConfig& cfg) {
    if (cfg.q_grid.empty()) throw ConfigError("q grid must be nonempty");
    for (double q : cfg.q_grid)
        if (!(q >= 1.0 && q <= 3.0))
            throw ConfigError("q grid values must lie in [1, 3], got " + std::to_string(q));
    if (cfg.dims.empty()) throw ConfigError("dims must be nonempty");
    for (int d : cfg.dims)
        if (d < 1 || d > 64)
            throw ConfigError("dims must lie in [1, 64], got " + std::to_string(d));
    if (cfg.trials_per_cell < 1) throw ConfigError("trials_per_cell must be >= 1");
    if (!(cfg.eigenvalue_range.first > 0.0))
        throw ConfigError("eigenvalue range needs lambda_min > 0");
    if (!(cfg.eigenvalue_range.first <= cfg.eigenvalue_range.second))
        throw ConfigError("eigenvalue range needs lambda_min <= lambda_max");
    if (cfg.tolerance_scale && !(*cfg.tolerance_scale > 0.0))
        throw ConfigError("tolerance_scale must be positive");
    if (cfg.suite == Suite::carlen_lieb)
        for (double q : cfg.q_grid)
            if (q <= 1.0 + 1e-12)
                throw ConfigError(
                    "carlen_lieb maps q to the exponent p = q - 1, so the q grid "
                    "must stay above 1; got " + std::to_string(q));
}

struct TrialRecord {
    Suite suite = Suite::theorem1;
    double q = 0.0;
    int dim = 0;
    int trial_index = 0;
    std::uint64_t seed = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double relative_margin = 0.0;
    bool holds = false;
    std::int64_t wall_time_ns = 0;
    std::string error;
};

struct NamedMatrix {
    std::string name;
    int dim = 0;
    std::vector<double> entries;
};

// Everything needed to re-run one trial from a file.
struct TrialInputs {
    Suite suite = Suite::theorem1;
    double q = 0.0;
    int dim = 0;
    double tol_scale = constants::default_tolerance_scale;
    int k = 0;            // family arity, when the suite uses one
    double epsilon = 0.0; // decoupling only
    std::vector<NamedMatrix> matrices;
};

namespace detail {

inline NamedMatrix named(std::string name, const SymmetricMatrix& m) {
    return NamedMatrix{std::move(name), m.dim(), m.entries()};
}

inline NamedMatrix named(std::string name, const Matrix& m) {
    return NamedMatrix{std::move(name), m.dim(), m.entries()};
}

inline const NamedMatrix& find_matrix(const TrialInputs& in, std::string_view name) {
    for (const NamedMatrix& m : in.matrices)
        if (m.name == name) return m;
    throw ConfigError("trial inputs are missing matrix '" + std::string(name) + "'");
}

inline SymmetricMatrix symmetric_input(const TrialInputs& in, std::string_view name) {
    const NamedMatrix& m = find_matrix(in, name);
    return SymmetricMatrix(m.dim, m.entries);
}

inline PositiveDefiniteMatrix pd_input(const TrialInputs& in, std::string_view name) {
    return PositiveDefiniteMatrix(symmetric_input(in, name));
}

inline Matrix general_input(const TrialInputs& in, std::string_view name) {
    const NamedMatrix& m = find_matrix(in, name);
    return Matrix(m.dim, m.entries);
}

inline IsometryFamily family_input(const TrialInputs& in) {
    std::vector<Matrix> members;
    members.reserve(static_cast<std::size_t>(in.k));
    for (int i = 0; i < in.k; ++i)
        members.push_back(general_input(in, "H" + std::to_string(i + 1)));
    return IsometryFamily(std::move(members), Completeness::exact);
}

inline FunctionalPoint point_input(const TrialInputs& in, std::string_view prefix) {
    std::vector<PositiveDefiniteMatrix> ms;
    ms.reserve(static_cast<std::size_t>(in.k));
    for (int i = 0; i < in.k; ++i)
        ms.push_back(pd_input(in, std::string(prefix) + std::to_string(i + 1)));
    return FunctionalPoint(std::move(ms));
}

} // namespace detail

// Family arity used by the campaign's family-based suites.
inline constexpr int campaign_family_arity = 2;

// Draws the inputs of one trial from its derived seed.  The draw order per
// suite is fixed; changing it changes every campaign.
inline TrialInputs generate_trial_inputs(Suite suite, double q, int dim,
                                         std::uint64_t trial_seed,
                                         const CampaignConfig& cfg) {
    TrialInputs in;
    in.suite = suite;
    in.q = q;
    in.dim = dim;
    in.tol_scale = resolve_tolerance(suite, cfg);
    const auto [lo, hi] = cfg.eigenvalue_range;

    auto pd = [&](std::uint64_t salt) {
        return random_pd(RandomEnsembleSpec(dim, lo, hi, derive_seed(trial_seed, salt)));
    };

    switch (suite) {
        case Suite::theorem1:
        case Suite::decoupling: {
            const char* an = (suite == Suite::theorem1) ? "A" : "L1";
            const char* bn = (suite == Suite::theorem1) ? "B" : "L2";
            in.matrices.push_back(detail::named(an, pd(1).base()));
            in.matrices.push_back(detail::named(bn, pd(2).base()));
            if (suite == Suite::decoupling) {
                SplitMix64 rng(derive_seed(trial_seed, 3));
                in.epsilon = std::exp(rng.uniform(std::log(1e-7), std::log(0.9)));
            }
            break;
        }
        case Suite::classical_gt: {
            in.matrices.push_back(detail::named(
                "A", random_symmetric(dim, -2.0, 2.0, derive_seed(trial_seed, 1))));
            in.matrices.push_back(detail::named(
                "B", random_symmetric(dim, -2.0, 2.0, derive_seed(trial_seed, 2))));
            break;
        }
        case Suite::phi_concavity:
        case Suite::carlen_lieb:
        case Suite::corollary6:
        case Suite::differential: {
            in.k = campaign_family_arity;
            const IsometryFamily fam = make_isometry_family(
                in.k, dim, derive_seed(trial_seed, 1), Completeness::exact);
            for (int i = 0; i < in.k; ++i)
                in.matrices.push_back(
                    detail::named("H" + std::to_string(i + 1), fam.member(i)));
            const char* first = (suite == Suite::corollary6) ? "A" : "X";
            const char* second =
                (suite == Suite::corollary6) ? "B" : (suite == Suite::differential ? "D" : "Y");
            for (int i = 0; i < in.k; ++i)
                in.matrices.push_back(detail::named(
                    first + std::to_string(i + 1), pd(10 + static_cast<std::uint64_t>(i)).base()));
            for (int i = 0; i < in.k; ++i)
                in.matrices.push_back(detail::named(
                    second + std::to_string(i + 1), pd(20 + static_cast<std::uint64_t>(i)).base()));
            break;
        }
        case Suite::entropy: {
            in.matrices.push_back(detail::named(
                "rho", random_unit_trace_pd(dim, derive_seed(trial_seed, 1)).base()));
            break;
        }
        case Suite::all:
            throw ConfigError("'all' is not a per-trial suite");
    }
    return in;
}

// Re-runs the check a trial encodes.  Shared by the campaign runner and
// replay, so a stored record and a fresh run follow the same code path.
inline InequalityVerdict evaluate_trial(const TrialInputs& in) {
    const DeformationParameter q(in.q);
    switch (in.suite) {
        case Suite::theorem1:
            return check_theorem1(detail::pd_input(in, "A"), detail::pd_input(in, "B"), q,
                                  in.tol_scale);
        case Suite::classical_gt:
            return check_classical_gt(detail::symmetric_input(in, "A"),
                                      detail::symmetric_input(in, "B"), in.tol_scale);
        case Suite::phi_concavity: {
            const IsometryFamily fam = detail::family_input(in);
            const FunctionalPoint x = detail::point_input(in, "X");
            const FunctionalPoint y = detail::point_input(in, "Y");
            const double mid = phi(fam, blend_points(x, y, 0.5), q);
            const double mean = 0.5 * (phi(fam, x, q) + phi(fam, y, q));
            return (q.value() < 2.0) ? verdict_from_sides(mean, mid, in.tol_scale)
                                     : verdict_from_sides(mid, mean, in.tol_scale);
        }
        case Suite::carlen_lieb: {
            const IsometryFamily fam = detail::family_input(in);
            const FunctionalPoint x = detail::point_input(in, "X");
            const FunctionalPoint y = detail::point_input(in, "Y");
            const double p = in.q - 1.0;
            const double mid = carlen_lieb(fam.members(), blend_points(x, y, 0.5), p);
            const double mean = 0.5 * (carlen_lieb(fam.members(), x, p) +
                                       carlen_lieb(fam.members(), y, p));
            return (p < 1.0) ? verdict_from_sides(mean, mid, in.tol_scale)
                             : verdict_from_sides(mid, mean, in.tol_scale);
        }
        case Suite::corollary6:
            return check_corollary6(detail::family_input(in), detail::point_input(in, "A"),
                                    detail::point_input(in, "B"), q, in.tol_scale);
        case Suite::differential:
            return check_differential_inequality(detail::family_input(in),
                                                 detail::point_input(in, "X"),
                                                 detail::point_input(in, "D"), q,
                                                 in.tol_scale);
        case Suite::decoupling:
            return decoupled_bound(detail::pd_input(in, "L1"), detail::pd_input(in, "L2"),
                                   q, DecouplingParameter(in.epsilon), in.tol_scale);
        case Suite::entropy: {
            const DensityMatrix rho(detail::pd_input(in, "rho"));
            return verdict_from_equality(tsallis_entropy(rho, q),
                                         tsallis_entropy_via_qlog(rho, q), in.tol_scale);
        }
        case Suite::all:
            break;
    }
    throw ConfigError("'all' is not a per-trial suite");
}

struct ReplayableTrial {
    TrialRecord record;
    TrialInputs inputs;
};

struct CellReport {
    Suite suite = Suite::theorem1;
    double q = 0.0;
    int dim = 0;
    double min_margin = 0.0;
    double median_margin = 0.0;
    double max_margin = 0.0;
    int violations = 0;
};

struct CampaignResult {
    CampaignConfig config;
    std::vector<TrialRecord> trials; // deterministic order: suite, q, dim, trial
    std::vector<ReplayableTrial> failures;
    std::vector<ReplayableTrial> kept; // all trials, when keep_all_inputs is set
    std::vector<CellReport> cells;
    bool pass = false;
};

namespace detail {

inline std::vector<Suite> resolve_suites(Suite s) {
    if (s != Suite::all) return {s};
    return {Suite::theorem1,   Suite::classical_gt, Suite::phi_concavity,
            Suite::carlen_lieb, Suite::corollary6,  Suite::differential,
            Suite::decoupling, Suite::entropy};
}

inline std::vector<double> suite_q_grid(Suite s, const CampaignConfig& cfg) {
    if (s != Suite::carlen_lieb) return cfg.q_grid;
    std::vector<double> grid;
    for (double q : cfg.q_grid)
        if (q > 1.0 + 1e-12) grid.push_back(q); // p = q - 1 must stay positive
    return grid;
}

inline int resolve_thread_count(int requested) {
    if (requested >= 1) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min<unsigned>(hw == 0 ? 4 : hw, 8));
}

struct TrialTask {
    Suite suite;
    double q;
    int q_index;
    int dim;
    int dim_index;
    int trial_index;
};

} // namespace detail

inline CampaignResult run_campaign(const CampaignConfig& cfg) {
    validate(cfg);

    std::vector<detail::TrialTask> tasks;
    for (Suite s : detail::resolve_suites(cfg.suite)) {
        const std::vector<double> grid = detail::suite_q_grid(s, cfg);
        for (int qi = 0; qi < static_cast<int>(grid.size()); ++qi)
            for (int di = 0; di < static_cast<int>(cfg.dims.size()); ++di)
                for (int t = 0; t < cfg.trials_per_cell; ++t)
                    tasks.push_back({s, grid[static_cast<std::size_t>(qi)], qi,
                                     cfg.dims[static_cast<std::size_t>(di)], di, t});
    }

    std::vector<TrialRecord> records(tasks.size());
    std::vector<std::optional<TrialInputs>> inputs(tasks.size());

    auto run_one = [&](std::size_t idx) {
        const detail::TrialTask& task = tasks[idx];
        std::uint64_t s = derive_seed(cfg.seed, suite_id(task.suite));
        s = derive_seed(s, static_cast<std::uint64_t>(task.q_index));
        s = derive_seed(s, static_cast<std::uint64_t>(task.dim_index));
        s = derive_seed(s, static_cast<std::uint64_t>(task.trial_index));

        TrialRecord rec;
        rec.suite = task.suite;
        rec.q = task.q;
        rec.dim = task.dim;
        rec.trial_index = task.trial_index;
        rec.seed = s;

        const auto t0 = std::chrono::steady_clock::now();
        try {
            TrialInputs in = generate_trial_inputs(task.suite, task.q, task.dim, s, cfg);
            const InequalityVerdict v = evaluate_trial(in);
            rec.lhs = v.lhs;
            rec.rhs = v.rhs;
            rec.gap = v.gap;
            rec.relative_margin = v.relative_margin;
            rec.holds = v.holds;
            if (!rec.holds || cfg.keep_all_inputs) inputs[idx] = std::move(in);
        } catch (const std::exception& e) {
            rec.lhs = rec.rhs = rec.gap = rec.relative_margin =
                std::numeric_limits<double>::quiet_NaN();
            rec.holds = false;
            rec.error = e.what();
        }
        rec.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        records[idx] = std::move(rec);
    };

    const int nthreads = detail::resolve_thread_count(cfg.threads);
    if (nthreads <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = static_cast<std::size_t>(t); i < tasks.size();
                     i += static_cast<std::size_t>(nthreads))
                    run_one(i);
            });
        for (std::thread& th : pool) th.join();
    }

    CampaignResult result;
    result.config = cfg;
    result.trials = std::move(records);

    // Aggregate by cell; tasks are grouped by construction.
    std::size_t i = 0;
    while (i < tasks.size()) {
        const detail::TrialTask& lead = tasks[i];
        CellReport cell;
        cell.suite = lead.suite;
        cell.q = lead.q;
        cell.dim = lead.dim;
        std::vector<double> margins;
        margins.reserve(static_cast<std::size_t>(cfg.trials_per_cell));
        for (; i < tasks.size() && tasks[i].suite == lead.suite &&
               tasks[i].q_index == lead.q_index && tasks[i].dim_index == lead.dim_index;
             ++i) {
            const TrialRecord& rec = result.trials[i];
            if (!rec.holds) ++cell.violations;
            if (std::isfinite(rec.relative_margin)) margins.push_back(rec.relative_margin);
        }
        if (!margins.empty()) {
            std::sort(margins.begin(), margins.end());
            cell.min_margin = margins.front();
            cell.max_margin = margins.back();
            const std::size_t n = margins.size();
            cell.median_margin = (n % 2 == 1)
                                     ? margins[n / 2]
                                     : 0.5 * (margins[n / 2 - 1] + margins[n / 2]);
        }
        result.cells.push_back(cell);
    }

    for (std::size_t idx = 0; idx < result.trials.size(); ++idx) {
        if (!inputs[idx]) continue;
        ReplayableTrial rt{result.trials[idx], *std::move(inputs[idx])};
        if (!rt.record.holds) result.failures.push_back(rt);
        if (cfg.keep_all_inputs) result.kept.push_back(std::move(rt));
    }

    int violations = 0;
    for (const CellReport& c : result.cells) violations += c.violations;
    result.pass = violations == 0;
    return result;
}

// ---- serialization ---------------------------------------------------------

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline nlohmann::json to_json(const TrialRecord& r) {
    return nlohmann::json{
        {"suite", suite_name(r.suite)},
        {"q", r.q},
        {"dim", r.dim},
        {"trial_index", r.trial_index},
        {"seed", r.seed},
        {"lhs", r.lhs},
        {"rhs", r.rhs},
        {"gap", r.gap},
        {"relative_margin", r.relative_margin},
        {"holds", r.holds},
        {"wall_time_ns", r.wall_time_ns},
        {"error", r.error},
    };
}

inline nlohmann::json to_json(const TrialInputs& in) {
    nlohmann::json ms = nlohmann::json::array();
    for (const NamedMatrix& m : in.matrices)
        ms.push_back({{"name", m.name}, {"dim", m.dim}, {"entries", m.entries}});
    return nlohmann::json{
        {"suite", suite_name(in.suite)}, {"q", in.q},
        {"dim", in.dim},                 {"tol_scale", in.tol_scale},
        {"k", in.k},                     {"epsilon", in.epsilon},
        {"matrices", std::move(ms)},
    };
}

inline nlohmann::json to_json(const ReplayableTrial& rt) {
    nlohmann::json j = to_json(rt.record);
    j["inputs"] = to_json(rt.inputs);
    return j;
}

inline nlohmann::json config_json(const CampaignConfig& cfg) {
    return nlohmann::json{
        {"suite", suite_name(cfg.suite)},
        {"q_grid", cfg.q_grid},
        {"dims", cfg.dims},
        {"trials_per_cell", cfg.trials_per_cell},
        {"seed", cfg.seed},
        {"eigenvalue_range", {cfg.eigenvalue_range.first, cfg.eigenvalue_range.second}},
        {"tolerance_scale",
         cfg.tolerance_scale ? nlohmann::json(*cfg.tolerance_scale) : nlohmann::json()},
        {"output_format", cfg.output_format == OutputFormat::json ? "json" : "csv"},
    };
}

inline nlohmann::json report_json(const CampaignResult& result) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CellReport& c : result.cells)
        cells.push_back({
            {"suite", suite_name(c.suite)},
            {"q", c.q},
            {"dim", c.dim},
            {"aggregates",
             {{"min_relative_margin", c.min_margin},
              {"median_relative_margin", c.median_margin},
              {"max_relative_margin", c.max_margin}}},
            {"violations", c.violations},
        });
    nlohmann::json failures = nlohmann::json::array();
    for (const ReplayableTrial& f : result.failures) failures.push_back(to_json(f));
    return nlohmann::json{
        {"config", config_json(result.config)},
        {"cells", std::move(cells)},
        {"failures", std::move(failures)},
        {"pass", result.pass},
        {"version", std::string(version)},
    };
}

inline std::string report_to_string(const CampaignResult& result) {
    return report_json(result).dump(2) + "\n";
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

inline constexpr std::string_view csv_header =
    "suite,q,dim,trial_index,seed,lhs,rhs,gap,relative_margin,holds";

inline void write_csv(const CampaignResult& result, std::ostream& os) {
    os << csv_header << "\n";
    for (const TrialRecord& r : result.trials) {
        os << detail::csv_escape(std::string(suite_name(r.suite))) << ','
           << format_double(r.q) << ',' << r.dim << ',' << r.trial_index << ','
           << r.seed << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
           << ',' << format_double(r.gap) << ',' << format_double(r.relative_margin)
           << ',' << (r.holds ? "true" : "false") << "\n";
    }
}

// ---- replay ----------------------------------------------------------------

inline TrialInputs inputs_from_json(const nlohmann::json& j) {
    TrialInputs in;
    const auto s = suite_from_name(j.at("suite").get<std::string>());
    if (!s || *s == Suite::all) throw ConfigError("replay record has an invalid suite");
    in.suite = *s;
    in.q = j.at("q").get<double>();
    in.dim = j.at("dim").get<int>();
    in.tol_scale = j.at("tol_scale").get<double>();
    in.k = j.value("k", 0);
    in.epsilon = j.value("epsilon", 0.0);
    for (const auto& m : j.at("matrices")) {
        NamedMatrix nm;
        nm.name = m.at("name").get<std::string>();
        nm.dim = m.at("dim").get<int>();
        nm.entries = m.at("entries").get<std::vector<double>>();
        in.matrices.push_back(std::move(nm));
    }
    return in;
}

inline TrialRecord record_from_json(const nlohmann::json& j) {
    TrialRecord r;
    const auto s = suite_from_name(j.at("suite").get<std::string>());
    if (!s || *s == Suite::all) throw ConfigError("replay record has an invalid suite");
    r.suite = *s;
    r.q = j.at("q").get<double>();
    r.dim = j.at("dim").get<int>();
    r.trial_index = j.at("trial_index").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.gap = j.at("gap").get<double>();
    r.relative_margin = j.at("relative_margin").get<double>();
    r.holds = j.at("holds").get<bool>();
    r.wall_time_ns = j.value("wall_time_ns", std::int64_t{0});
    r.error = j.value("error", std::string());
    return r;
}

struct ReplayResult {
    TrialRecord recorded;
    InequalityVerdict recomputed;
    bool reproduced = false;
    double lhs_delta = 0.0;
    double rhs_delta = 0.0;
};

inline ReplayResult replay_trial(const nlohmann::json& j) {
    ReplayResult out;
    try {
        out.recorded = record_from_json(j);
        out.recomputed = evaluate_trial(inputs_from_json(j.at("inputs")));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed replay record: ") + e.what());
    }
    out.lhs_delta = std::abs(out.recomputed.lhs - out.recorded.lhs);
    out.rhs_delta = std::abs(out.recomputed.rhs - out.recorded.rhs);
    const double lhs_tol = 1e-12 * std::max(1.0, std::abs(out.recorded.lhs));
    const double rhs_tol = 1e-12 * std::max(1.0, std::abs(out.recorded.rhs));
    out.reproduced = out.lhs_delta <= lhs_tol && out.rhs_delta <= rhs_tol;
    return out;
}

inline ReplayResult replay_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open replay record: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed replay record: ") + e.what());
    }
    return replay_trial(j);
}

// ---- q sweep ----------------------------------------------------------------

struct SweepRow {
    double q = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double relative_margin = 0.0;
};

// One fixed seeded (A, B) pair evaluated across a q grid in the written
// (unoriented) order, so the gap column changes sign at q = 2.
inline std::vector<SweepRow> sweep_gap(std::uint64_t a_seed, std::uint64_t b_seed,
                                       std::span<const double> q_grid, int dim,
                                       std::pair<double, double> eigenvalue_range = {0.05,
                                                                                     20.0}) {
    for (double q : q_grid)
        if (!(q >= 1.0 && q <= 3.0))
            throw ConfigError("sweep q grid values must lie in [1, 3]");
    const PositiveDefiniteMatrix a = random_pd(
        RandomEnsembleSpec(dim, eigenvalue_range.first, eigenvalue_range.second, a_seed));
    const PositiveDefiniteMatrix b = random_pd(
        RandomEnsembleSpec(dim, eigenvalue_range.first, eigenvalue_range.second, b_seed));

    std::vector<SweepRow> rows;
    rows.reserve(q_grid.size());
    for (double q : q_grid) {
        const auto [lhs, rhs] = theorem1_sides(a, b, DeformationParameter(q));
        SweepRow row;
        row.q = q;
        row.lhs = lhs;
        row.rhs = rhs;
        row.gap = rhs - lhs;
        row.relative_margin = row.gap / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        rows.push_back(row);
    }
    return rows;
}

inline void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& os) {
    os << "q,lhs,rhs,gap,relative_margin\n";
    for (const SweepRow& r : rows)
        os << format_double(r.q) << ',' << format_double(r.lhs) << ','
           << format_double(r.rhs) << ',' << format_double(r.gap) << ','
           << format_double(r.relative_margin) << "\n";
}

} // namespace qgt
