// imspelab command-line tool: closed-form IMSPE evaluation, coordinate-descent
// design search, and the reproducible study commands (sweep, baseline,
// profile, hue, tornado). Every command writes its artifacts plus a manifest
// (tool version + full config + artifact list) so identical invocations
// produce byte-identical outputs.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "imspelab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace imspelab;

namespace {

// Flag-level misuse that CLI11's type checks cannot express (bad numeric
// strings, inconsistent flag combinations). Exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    int digits = 60;
    int max_digits = 960;
    int jobs = 1;
    std::string out_dir = ".";
    CLI::Option* digits_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;

    PrecisionContext ctx() const { return PrecisionContext(digits, max_digits); }
    // Default print width is 20 significant digits; an explicit --digits
    // widens the printed output along with the working precision.
    int print_digits() const {
        return digits_opt && digits_opt->count() ? digits : 20;
    }
    int resolved_jobs() const {
        if (jobs_opt && jobs_opt->count()) return jobs;
        if (const char* env = std::getenv("IMSPE_LAB_JOBS")) {
            try {
                size_t pos = 0;
                int v = std::stoi(env, &pos);
                if (pos != std::string(env).size() || v < 1)
                    throw std::invalid_argument("");
                return v;
            } catch (const std::exception&) {
                throw UsageError(std::string("IMSPE_LAB_JOBS is not a positive "
                                             "integer: '") +
                                 env + "'");
            }
        }
        return 1;
    }
};

void add_common(CLI::App* sub, Common& c) {
    c.digits_opt =
        sub->add_option("--digits", c.digits,
                        "Working precision in significant decimal digits; when "
                        "given it also sets the printed width (default print "
                        "width is 20)")
            ->check(CLI::Range(16, 100000));
    sub->add_option("--max-digits", c.max_digits,
                    "Precision-escalation ceiling in decimal digits")
        ->check(CLI::Range(16, 1000000));
    c.jobs_opt = sub->add_option("--jobs", c.jobs,
                                 "Worker threads for independent evaluations "
                                 "(default: IMSPE_LAB_JOBS or 1)")
                     ->check(CLI::Range(1, 4096));
    sub->add_option("--out-dir", c.out_dir, "Output directory (created if missing)");
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::vector<BigReal> parse_big_list(const std::string& s, const char* flag,
                                    const PrecisionContext& ctx) {
    std::vector<BigReal> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        try {
            out.push_back(from_string(cur, ctx));
        } catch (const Error& e) {
            throw UsageError(std::string(flag) + ": " + e.what());
        }
    }
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

BigReal parse_big(const std::string& s, const char* flag,
                  const PrecisionContext& ctx) {
    try {
        return from_string(s, ctx);
    } catch (const Error& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

void require_positive(const std::vector<BigReal>& v, const char* flag) {
    for (const BigReal& x : v)
        if (!x.is_finite() || x.sign() <= 0)
            throw UsageError(std::string(flag) + ": values must be positive");
}

CovarianceParams make_params(const std::string& theta_str,
                             const std::string& sigma2_str, int expect_dim,
                             const PrecisionContext& ctx) {
    std::vector<BigReal> theta = parse_big_list(theta_str, "--theta", ctx);
    require_positive(theta, "--theta");
    if (expect_dim > 0 && static_cast<int>(theta.size()) != expect_dim)
        throw UsageError("--theta: expected " + std::to_string(expect_dim) +
                         " comma-separated values, got " +
                         std::to_string(theta.size()));
    BigReal s2 = parse_big(sigma2_str, "--sigma2", ctx);
    require_positive({s2}, "--sigma2");
    return CovarianceParams(std::move(theta), std::move(s2));
}

// Loads a design file, optionally appending a twin pair given by the
// --twin-barycenter/--twin-delta flag pair (the file's rows become the free
// leading rows). A file that already marks a twin_group conflicts with the
// flags.
Design load_design(const std::string& path, const std::string& bary_str,
                   const std::string& delta_str, const PrecisionContext& ctx) {
    Design d = read_design_csv_file(path, ctx);
    const bool hb = !bary_str.empty(), hd = !delta_str.empty();
    if (hb != hd)
        throw UsageError("--twin-barycenter and --twin-delta must be given together");
    if (!hb) return d;
    if (d.has_twin())
        throw UsageError("design file already marks a twin_group; drop "
                         "--twin-barycenter/--twin-delta");
    TwinSpec tw;
    tw.barycenter = parse_big_list(bary_str, "--twin-barycenter", ctx);
    tw.delta = parse_big_list(delta_str, "--twin-delta", ctx);
    if (static_cast<int>(tw.barycenter.size()) != d.dim() ||
        static_cast<int>(tw.delta.size()) != d.dim())
        throw UsageError("--twin-barycenter/--twin-delta must have " +
                         std::to_string(d.dim()) + " components");
    std::vector<BigReal> leading;
    leading.reserve(static_cast<size_t>(d.n()) * d.dim());
    for (int i = 0; i < d.n(); ++i)
        for (int k = 0; k < d.dim(); ++k) leading.push_back(d.at(i, k));
    return Design(d.n() + 2, d.dim(), std::move(leading), std::move(tw));
}

ordered_json common_config(const Common& c) {
    // Only parameters that shape the computation; the output directory is
    // where the run happened, not what it computed, and recording it would
    // break byte-identity of reruns into fresh directories.
    ordered_json j;
    j["digits"] = c.digits;
    j["max_digits"] = c.max_digits;
    j["print_digits"] = c.print_digits();
    j["jobs"] = c.resolved_jobs();
    return j;
}

int exit_by_ok_fraction(long ok, long total) {
    // Study commands succeed when at least 99% of their records did.
    return (total > 0 && ok * 100 >= total * 99) ? 0 : 4;
}

// ---------------------------------------------------------------- eval ----

struct EvalOpts {
    Common common;
    std::string design_path, theta, sigma2 = "1", twin_bary, twin_delta;
};

int run_eval(const EvalOpts& o) {
    PrecisionContext ctx = o.common.ctx();
    Design design = load_design(o.design_path, o.twin_bary, o.twin_delta, ctx);
    CovarianceParams params = make_params(o.theta, o.sigma2, design.dim(), ctx);
    ImspeResult res = imspe(design, params, ctx);
    const int pd = o.common.print_digits();
    std::cout << fmt_big(res.imspe, pd) << "\n";

    fs::create_directories(o.common.out_dir);
    ordered_json result = imspe_result_to_json(res, pd);
    result["design"] = design_to_json(design, pd);
    write_json_file(join(o.common.out_dir, "eval_result.json"), result);
    ordered_json config = common_config(o.common);
    config["design"] = o.design_path;
    config["theta"] = o.theta;
    config["sigma2"] = o.sigma2;
    config["twin_barycenter"] = o.twin_bary;
    config["twin_delta"] = o.twin_delta;
    write_manifest(join(o.common.out_dir, "eval_manifest.json"), "eval", config,
                   {"eval_result.json"});
    return 0;
}

// -------------------------------------------------------------- search ----

struct SearchOpts {
    Common common;
    int n = 4, d = 2, starts = 50, max_sweeps = 200, grid = 33;
    std::uint64_t seed = 1;
    double coord_tol = 1e-10, obj_tol = 1e-20;
    double merge_tol = 1e-5, split_tol = 1e-2;
    std::string theta, sigma2 = "1";
};

SearchConfig make_search_config(const SearchOpts& o) {
    SearchConfig cfg;
    cfg.coord_tol = o.coord_tol;
    cfg.obj_tol = o.obj_tol;
    cfg.max_sweeps = o.max_sweeps;
    cfg.line_search_grid = o.grid;
    cfg.rng_seed = o.seed;
    cfg.twin_merge_tol = o.merge_tol;
    cfg.twin_split_tol = o.split_tol;
    return cfg;
}

ordered_json search_config_json(const SearchOpts& o) {
    ordered_json config = common_config(o.common);
    config["n"] = o.n;
    config["d"] = o.d;
    config["theta"] = o.theta;
    config["sigma2"] = o.sigma2;
    config["starts"] = o.starts;
    config["seed"] = o.seed;
    config["max_sweeps"] = o.max_sweeps;
    config["grid"] = o.grid;
    config["coord_tol"] = o.coord_tol;
    config["obj_tol"] = o.obj_tol;
    config["twin_merge_tol"] = o.merge_tol;
    config["twin_split_tol"] = o.split_tol;
    return config;
}

int run_search(const SearchOpts& o) {
    PrecisionContext ctx = o.common.ctx();
    CovarianceParams params = make_params(o.theta, o.sigma2, o.d, ctx);
    SearchResult res = multistart(o.starts, o.n, o.d, params, make_search_config(o),
                                  ctx, o.common.resolved_jobs());
    const int pd = o.common.print_digits();
    std::cout << fmt_big(res.imspe, pd) << "\n";

    fs::create_directories(o.common.out_dir);
    write_design_csv_file(join(o.common.out_dir, "search_design.csv"), *res.design,
                          pd);
    write_json_file(join(o.common.out_dir, "search_result.json"),
                    search_result_to_json(res, pd));
    write_manifest(join(o.common.out_dir, "search_manifest.json"), "search",
                   search_config_json(o), {"search_design.csv", "search_result.json"});
    return res.converged ? 0 : 5;
}

// --------------------------------------------------------------- sweep ----

struct SweepOpts {
    Common common;
    std::string theta1_list, theta2_list, sigma2 = "1";
    int starts = 8, max_sweeps = 200;
    std::uint64_t seed = 1;
    double tol = 1e-5, twin_tol = 1e-3;
};

int run_sweep(const SweepOpts& o) {
    PrecisionContext ctx = o.common.ctx();
    std::vector<BigReal> t1 = parse_big_list(o.theta1_list, "--theta1-list", ctx);
    std::vector<BigReal> t2 = parse_big_list(o.theta2_list, "--theta2-list", ctx);
    require_positive(t1, "--theta1-list");
    require_positive(t2, "--theta2-list");
    BigReal s2 = parse_big(o.sigma2, "--sigma2", ctx);
    require_positive({s2}, "--sigma2");

    std::vector<std::pair<BigReal, BigReal>> grid;
    grid.reserve(t1.size() * t2.size());
    for (const BigReal& a : t1)
        for (const BigReal& b : t2) grid.emplace_back(a, b);

    SearchConfig cfg;
    cfg.rng_seed = o.seed;
    cfg.max_sweeps = o.max_sweeps;
    std::vector<PhaseRecord> records =
        phase_sweep(grid, s2, o.starts, cfg, ctx, o.common.resolved_jobs(), o.tol,
                    o.twin_tol);

    // Rectangle-phase widths per constant-theta1 scan; meaningful only when
    // theta2 ascends along the scan.
    bool ascending = true;
    for (size_t i = 1; i < t2.size(); ++i)
        if (!(t2[i - 1] < t2[i])) ascending = false;
    std::vector<RectWidth> widths;
    for (size_t i = 0; i < t1.size(); ++i) {
        std::vector<PhaseRecord> scan(records.begin() + i * t2.size(),
                                      records.begin() + (i + 1) * t2.size());
        if (ascending) {
            widths.push_back(rectangle_width(scan));
        } else {
            RectWidth w;
            w.theta1 = t1[i];
            widths.push_back(std::move(w));
        }
    }

    const int pd = o.common.print_digits();
    fs::create_directories(o.common.out_dir);
    {
        std::ostringstream os;
        write_sweep_csv(os, records, pd);
        write_text_file(join(o.common.out_dir, "sweep.csv"), os.str());
    }
    {
        std::ostringstream os;
        write_rect_width_csv(os, widths);
        write_text_file(join(o.common.out_dir, "sweep_widths.csv"), os.str());
    }
    ordered_json config = common_config(o.common);
    config["theta1_list"] = o.theta1_list;
    config["theta2_list"] = o.theta2_list;
    config["sigma2"] = o.sigma2;
    config["starts"] = o.starts;
    config["seed"] = o.seed;
    config["max_sweeps"] = o.max_sweeps;
    config["tol"] = o.tol;
    config["twin_tol"] = o.twin_tol;
    write_manifest(join(o.common.out_dir, "sweep_manifest.json"), "sweep", config,
                   {"sweep.csv", "sweep_widths.csv"});

    long ok = 0;
    for (const PhaseRecord& r : records) ok += r.ok ? 1 : 0;
    std::cout << ok << "/" << records.size() << " grid points ok\n";
    return exit_by_ok_fraction(ok, static_cast<long>(records.size()));
}

// ---------------------------------------------------- baseline/tornado ----

struct SampleOpts {
    Common common;
    int n = 4, d = 2;
    long samples = 10000;
    std::uint64_t seed = 1;
    std::string theta, sigma2 = "1", ref_imspe, ref_design;
};

BigReal resolve_reference(const SampleOpts& o, const CovarianceParams& params,
                          const PrecisionContext& ctx) {
    const bool has_val = !o.ref_imspe.empty(), has_file = !o.ref_design.empty();
    if (has_val == has_file)
        throw UsageError(
            "exactly one of --reference-imspe / --reference-design is required");
    if (has_val) {
        BigReal r = parse_big(o.ref_imspe, "--reference-imspe", ctx);
        require_positive({r}, "--reference-imspe");
        return r;
    }
    Design ref = read_design_csv_file(o.ref_design, ctx);
    if (ref.dim() != params.dim())
        throw UsageError("--reference-design dimension mismatch with --theta");
    return imspe(ref, params, ctx).imspe;
}

ordered_json sample_config_json(const SampleOpts& o) {
    ordered_json config = common_config(o.common);
    config["n"] = o.n;
    config["d"] = o.d;
    config["theta"] = o.theta;
    config["sigma2"] = o.sigma2;
    config["samples"] = o.samples;
    config["seed"] = o.seed;
    config["reference_imspe"] = o.ref_imspe;
    config["reference_design"] = o.ref_design;
    return config;
}

int run_baseline(const SampleOpts& o) {
    PrecisionContext ctx = o.common.ctx();
    CovarianceParams params = make_params(o.theta, o.sigma2, o.d, ctx);
    BigReal ref = resolve_reference(o, params, ctx);
    BaselineReport report = random_baseline(o.samples, o.n, o.d, params, ref,
                                            o.seed, ctx, o.common.resolved_jobs());

    const int pd = o.common.print_digits();
    fs::create_directories(o.common.out_dir);
    {
        std::ostringstream os;
        write_baseline_csv(os, report, pd);
        write_text_file(join(o.common.out_dir, "baseline.csv"), os.str());
    }
    write_json_file(join(o.common.out_dir, "baseline_summary.json"),
                    baseline_summary_to_json(report, pd));
    write_manifest(join(o.common.out_dir, "baseline_manifest.json"), "baseline",
                   sample_config_json(o), {"baseline.csv", "baseline_summary.json"});

    std::cout << "count_below_reference " << report.count_below_reference << "\n"
              << "min_gap " << fmt_big(report.min_gap, pd) << "\n";
    return exit_by_ok_fraction(report.n_samples - report.skipped, report.n_samples);
}

int run_tornado(const SampleOpts& o) {
    PrecisionContext ctx = o.common.ctx();
    CovarianceParams params = make_params(o.theta, o.sigma2, o.d, ctx);
    BigReal ref = resolve_reference(o, params, ctx);
    BaselineReport report = random_baseline(o.samples, o.n, o.d, params, ref,
                                            o.seed, ctx, o.common.resolved_jobs());
    std::vector<TornadoPoint> points = tornado_data(report, ref, ctx);

    const int pd = o.common.print_digits();
    fs::create_directories(o.common.out_dir);
    {
        std::ostringstream os;
        write_tornado_csv(os, points, pd);
        write_text_file(join(o.common.out_dir, "tornado.csv"), os.str());
    }
    write_manifest(join(o.common.out_dir, "tornado_manifest.json"), "tornado",
                   sample_config_json(o), {"tornado.csv"});

    long ok = 0;
    for (const TornadoPoint& p : points) ok += p.ok ? 1 : 0;
    std::cout << ok << "/" << points.size() << " samples ok\n";
    return exit_by_ok_fraction(ok, static_cast<long>(points.size()));
}

// ------------------------------------------------------------- profile ----

struct ProfileOpts {
    Common common;
    std::string design_path, theta, sigma2 = "1", twin_bary, twin_delta, deltas;
    int axis = 0;
};

int run_profile(const ProfileOpts& o) {
    PrecisionContext ctx = o.common.ctx();
    Design base = load_design(o.design_path, o.twin_bary, o.twin_delta, ctx);
    if (!base.has_twin())
        throw UsageError("profile needs a twin pair: mark twin_group rows in the "
                         "design file or pass --twin-barycenter/--twin-delta");
    CovarianceParams params = make_params(o.theta, o.sigma2, base.dim(), ctx);
    std::vector<BigReal> deltas = parse_big_list(o.deltas, "--deltas", ctx);
    std::vector<ProfilePoint> points = twin_profile(base, params, o.axis, deltas,
                                                    ctx, o.common.resolved_jobs());

    const int pd = o.common.print_digits();
    ordered_json summary;
    summary["axis"] = o.axis;
    summary["richardson_limit"] = nullptr;
    summary["richardson_limit_alt"] = nullptr;
    summary["loglog_slope"] = nullptr;
    summary["quadratic_coefficient"] = nullptr;
    try {
        BigReal limit = richardson_limit(points, ctx);
        summary["richardson_limit"] = fmt_big(limit, pd);
        summary["loglog_slope"] = loglog_slope(points, limit);
        summary["quadratic_coefficient"] = quadratic_coefficient(points, limit);
        // Stability probe: the same extrapolation from the next-smallest
        // delta triple (drop the smallest usable point).
        std::vector<ProfilePoint> rest = points;
        for (auto it = rest.begin(); it != rest.end(); ++it)
            if (it->ok) {
                rest.erase(it);
                break;
            }
        summary["richardson_limit_alt"] = fmt_big(richardson_limit(rest, ctx), pd);
    } catch (const Error&) {
        // Not enough usable points for extrapolation; the nulls stand.
    }

    fs::create_directories(o.common.out_dir);
    {
        std::ostringstream os;
        write_profile_csv(os, points, pd);
        write_text_file(join(o.common.out_dir, "profile.csv"), os.str());
    }
    write_json_file(join(o.common.out_dir, "profile_summary.json"), summary);
    ordered_json config = common_config(o.common);
    config["design"] = o.design_path;
    config["theta"] = o.theta;
    config["sigma2"] = o.sigma2;
    config["twin_barycenter"] = o.twin_bary;
    config["twin_delta"] = o.twin_delta;
    config["axis"] = o.axis;
    config["deltas"] = o.deltas;
    write_manifest(join(o.common.out_dir, "profile_manifest.json"), "profile",
                   config, {"profile.csv", "profile_summary.json"});

    long ok = 0;
    for (const ProfilePoint& p : points) ok += p.ok ? 1 : 0;
    std::cout << ok << "/" << points.size() << " profile points ok\n";
    return exit_by_ok_fraction(ok, static_cast<long>(points.size()));
}

// ----------------------------------------------------------------- hue ----

struct HueOpts {
    Common common;
    std::string design_path, theta, sigma2 = "1", twin_bary, twin_delta;
    std::string ref_imspe, ref_design;
    int grid_n = 0;
};

int run_hue(const HueOpts& o) {
    PrecisionContext ctx = o.common.ctx();
    Design base = load_design(o.design_path, o.twin_bary, o.twin_delta, ctx);
    if (!base.has_twin())
        throw UsageError("hue needs a twin pair: mark twin_group rows in the "
                         "design file or pass --twin-barycenter/--twin-delta");
    CovarianceParams params = make_params(o.theta, o.sigma2, base.dim(), ctx);
    const bool has_val = !o.ref_imspe.empty(), has_file = !o.ref_design.empty();
    if (has_val == has_file)
        throw UsageError(
            "exactly one of --reference-imspe / --reference-design is required");
    BigReal ref;
    if (has_val) {
        ref = parse_big(o.ref_imspe, "--reference-imspe", ctx);
        require_positive({ref}, "--reference-imspe");
    } else {
        ref = imspe(read_design_csv_file(o.ref_design, ctx), params, ctx).imspe;
    }
    std::vector<HueCell> cells =
        hue_grid(base, params, o.grid_n, ref, ctx, o.common.resolved_jobs());

    const int pd = o.common.print_digits();
    fs::create_directories(o.common.out_dir);
    {
        std::ostringstream os;
        write_hue_csv(os, cells, pd);
        write_text_file(join(o.common.out_dir, "hue.csv"), os.str());
    }
    ordered_json config = common_config(o.common);
    config["design"] = o.design_path;
    config["theta"] = o.theta;
    config["sigma2"] = o.sigma2;
    config["twin_barycenter"] = o.twin_bary;
    config["twin_delta"] = o.twin_delta;
    config["grid_n"] = o.grid_n;
    config["reference_imspe"] = o.ref_imspe;
    config["reference_design"] = o.ref_design;
    write_manifest(join(o.common.out_dir, "hue_manifest.json"), "hue", config,
                   {"hue.csv"});

    long ok = 0;
    for (const HueCell& c : cells) ok += c.ok ? 1 : 0;
    std::cout << ok << "/" << cells.size() << " grid cells ok\n";
    return exit_by_ok_fraction(ok, static_cast<long>(cells.size()));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"imspelab: closed-form IMSPE evaluation, coordinate-descent "
                 "design search, and study data generation for Gaussian-process "
                 "designs on [-1,1]^D"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    int exit_code = 0;

    auto eo = std::make_shared<EvalOpts>();
    CLI::App* eval = app.add_subcommand("eval", "Evaluate the IMSPE of a design");
    eval->add_option("--design", eo->design_path, "Design CSV file")->required();
    eval->add_option("--theta", eo->theta, "Comma-separated covariance scales")
        ->required();
    eval->add_option("--sigma2", eo->sigma2, "Process variance (default 1)");
    eval->add_option("--twin-barycenter", eo->twin_bary,
                     "Comma-separated twin barycenter (appends a twin pair)");
    eval->add_option("--twin-delta", eo->twin_delta,
                     "Comma-separated twin half-offset (appends a twin pair)");
    add_common(eval, eo->common);
    eval->callback([&exit_code, eo] { exit_code = run_eval(*eo); });

    auto so = std::make_shared<SearchOpts>();
    CLI::App* search =
        app.add_subcommand("search", "Multistart coordinate-descent IMSPE search");
    search->add_option("--n", so->n, "Number of design points")
        ->check(CLI::Range(1, 64));
    search->add_option("--d", so->d, "Number of factors")->check(CLI::Range(1, 16));
    search->add_option("--theta", so->theta, "Comma-separated covariance scales")
        ->required();
    search->add_option("--sigma2", so->sigma2, "Process variance (default 1)");
    search->add_option("--starts", so->starts, "Number of random starts")
        ->check(CLI::Range(1, 1000000));
    search->add_option("--seed", so->seed, "RNG seed for the starts");
    search->add_option("--max-sweeps", so->max_sweeps, "Sweep budget per start")
        ->check(CLI::Range(1, 100000));
    search->add_option("--grid", so->grid, "Line-search bracket grid points")
        ->check(CLI::Range(3, 100000));
    search->add_option("--coord-tol", so->coord_tol, "Coordinate tolerance")
        ->check(CLI::PositiveNumber);
    search->add_option("--obj-tol", so->obj_tol, "Objective tolerance")
        ->check(CLI::PositiveNumber);
    search->add_option("--twin-merge-tol", so->merge_tol,
                       "Pair separation that forms a twin")
        ->check(CLI::PositiveNumber);
    search->add_option("--twin-split-tol", so->split_tol,
                       "Twin offset that dissolves the pair")
        ->check(CLI::PositiveNumber);
    add_common(search, so->common);
    search->callback([&exit_code, so] { exit_code = run_search(*so); });

    auto wo = std::make_shared<SweepOpts>();
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Phase sweep: search + classify over a theta grid");
    sweep->add_option("--theta1-list", wo->theta1_list,
                      "Comma-separated theta1 values")
        ->required();
    sweep->add_option("--theta2-list", wo->theta2_list,
                      "Comma-separated theta2 values (ascending for widths)")
        ->required();
    sweep->add_option("--sigma2", wo->sigma2, "Process variance (default 1)");
    sweep->add_option("--starts", wo->starts, "Random starts per grid point")
        ->check(CLI::Range(1, 1000000));
    sweep->add_option("--seed", wo->seed, "RNG seed shared by grid points");
    sweep->add_option("--max-sweeps", wo->max_sweeps, "Sweep budget per start")
        ->check(CLI::Range(1, 100000));
    sweep->add_option("--tol", wo->tol, "Classification tolerance")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--twin-tol", wo->twin_tol, "Twin-detection separation")
        ->check(CLI::PositiveNumber);
    add_common(sweep, wo->common);
    sweep->callback([&exit_code, wo] { exit_code = run_sweep(*wo); });

    auto bo = std::make_shared<SampleOpts>();
    CLI::App* baseline = app.add_subcommand(
        "baseline", "Uniform-random designs vs a reference IMSPE");
    baseline->add_option("--n", bo->n, "Number of design points")
        ->check(CLI::Range(1, 64));
    baseline->add_option("--d", bo->d, "Number of factors")->check(CLI::Range(1, 16));
    baseline->add_option("--theta", bo->theta, "Comma-separated covariance scales")
        ->required();
    baseline->add_option("--sigma2", bo->sigma2, "Process variance (default 1)");
    baseline->add_option("--samples", bo->samples, "Number of random designs")
        ->check(CLI::Range(1L, 100000000L));
    baseline->add_option("--seed", bo->seed, "RNG seed");
    baseline->add_option("--reference-imspe", bo->ref_imspe,
                         "Reference IMSPE value");
    baseline->add_option("--reference-design", bo->ref_design,
                         "Design CSV evaluated as the reference");
    add_common(baseline, bo->common);
    baseline->callback([&exit_code, bo] { exit_code = run_baseline(*bo); });

    auto po = std::make_shared<ProfileOpts>();
    CLI::App* profile = app.add_subcommand(
        "profile", "IMSPE vs twin separation along one axis");
    profile->add_option("--design", po->design_path, "Base design CSV (with twin)")
        ->required();
    profile->add_option("--theta", po->theta, "Comma-separated covariance scales")
        ->required();
    profile->add_option("--sigma2", po->sigma2, "Process variance (default 1)");
    profile->add_option("--twin-barycenter", po->twin_bary,
                        "Comma-separated twin barycenter (appends a twin pair)");
    profile->add_option("--twin-delta", po->twin_delta,
                        "Comma-separated twin half-offset (appends a twin pair)");
    profile->add_option("--axis", po->axis, "1-based twin offset axis")
        ->required()
        ->check(CLI::Range(1, 16));
    profile->add_option("--deltas", po->deltas,
                        "Comma-separated ascending positive separations")
        ->required();
    add_common(profile, po->common);
    profile->callback([&exit_code, po] { exit_code = run_profile(*po); });

    auto ho = std::make_shared<HueOpts>();
    CLI::App* hue = app.add_subcommand(
        "hue", "IMSPE gap over a grid of roaming-twin positions");
    hue->add_option("--design", ho->design_path, "Base design CSV (with twin)")
        ->required();
    hue->add_option("--theta", ho->theta, "Comma-separated covariance scales")
        ->required();
    hue->add_option("--sigma2", ho->sigma2, "Process variance (default 1)");
    hue->add_option("--twin-barycenter", ho->twin_bary,
                    "Comma-separated twin barycenter (appends a twin pair)");
    hue->add_option("--twin-delta", ho->twin_delta,
                    "Comma-separated twin half-offset (appends a twin pair)");
    hue->add_option("--grid-n", ho->grid_n, "Grid nodes per axis")
        ->required()
        ->check(CLI::Range(2, 100000));
    hue->add_option("--reference-imspe", ho->ref_imspe, "Reference IMSPE value");
    hue->add_option("--reference-design", ho->ref_design,
                    "Design CSV evaluated as the reference");
    add_common(hue, ho->common);
    hue->callback([&exit_code, ho] { exit_code = run_hue(*ho); });

    auto to = std::make_shared<SampleOpts>();
    CLI::App* tornado = app.add_subcommand(
        "tornado", "Random-design IMSPE gap vs geometry statistic d");
    tornado->add_option("--n", to->n, "Number of design points")
        ->check(CLI::Range(1, 64));
    tornado->add_option("--d", to->d, "Number of factors")->check(CLI::Range(1, 16));
    tornado->add_option("--theta", to->theta, "Comma-separated covariance scales")
        ->required();
    tornado->add_option("--sigma2", to->sigma2, "Process variance (default 1)");
    tornado->add_option("--samples", to->samples, "Number of random designs")
        ->check(CLI::Range(1L, 100000000L));
    tornado->add_option("--seed", to->seed, "RNG seed");
    tornado->add_option("--reference-imspe", to->ref_imspe,
                        "Reference IMSPE value");
    tornado->add_option("--reference-design", to->ref_design,
                        "Design CSV evaluated as the reference");
    add_common(tornado, to->common);
    tornado->callback([&exit_code, to] { exit_code = run_tornado(*to); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help / --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error"
                  << (e.line > 0 ? " (line " + std::to_string(e.line) + ")" : "")
                  << ": " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return exit_code;
}
