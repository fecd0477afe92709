// randlitt: command-line front end for the randomized Littlewood experiments.
//
// Exit codes: 0 success, 1 negative verdict (uncovered points, failed
// certificate), 2 usage or domain error, 3 budget refusal.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "randlitt/condition.hpp"
#include "randlitt/coverage.hpp"
#include "randlitt/experiment.hpp"
#include "randlitt/parse.hpp"
#include "randlitt/region.hpp"

using namespace randlitt;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

constexpr const char* kPsiGrammar =
    "psi family: paper:<delta> | constant:<c> | custom:<v1,v2,...>";

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    std::string budget = "1e10";
    std::string precision = "double";
    unsigned threads = 0;
    bool zero_shifts = false;

    double budget_value() const
    {
        const double b = parse_real(budget, "budget");
        if (!(b > 0.0)) throw DomainError("--budget must be > 0");
        return b;
    }
    ShiftStream shifts() const { return zero_shifts ? ShiftStream::zero() : ShiftStream(seed); }
};

// Ordered key/value echo of the effective configuration.
class ConfigEcho {
public:
    ConfigEcho& add(std::string key, std::string value)
    {
        entries_.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    void write_csv_header(std::ostream& out) const
    {
        for (const auto& [k, v] : entries_) out << "# " << k << ": " << v << '\n';
    }
    json to_json() const
    {
        json j = json::object();
        for (const auto& [k, v] : entries_) j[k] = v;
        return j;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

ConfigEcho base_echo(const GlobalOptions& g, const std::string& subcommand,
                     const std::string& format)
{
    ConfigEcho echo;
    echo.add("randlitt", RANDLITT_VERSION)
        .add("subcommand", subcommand)
        .add("seed", std::to_string(g.seed))
        .add("shifts", g.zero_shifts ? "zero (debug, non-random)" : "counter-keyed uniform")
        .add("format", format)
        .add("budget", fmt::format("{:g}", g.budget_value()))
        .add("precision", g.precision)
        .add("statistic_n0", "2");
    return echo;
}

// Writes to --out if given, else stdout.
class Output {
public:
    explicit Output(const std::string& path, bool append = false)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(
                path, append ? std::ios::app : std::ios::trunc);
            if (!*file_) throw DomainError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? static_cast<std::ostream&>(*file_) : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string resolve_format(const GlobalOptions& g, const std::string& fallback)
{
    const std::string f = g.format.empty() ? fallback : g.format;
    if (f != "csv" && f != "json" && f != "jsonl")
        throw DomainError("--format must be csv, json or jsonl");
    return f;
}

std::string real(double x) { return fmt::format("{:.17g}", x); }

double parse_threshold(const std::string& text)
{
    if (text == "inf" || text == "+inf" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    return parse_real(text, "threshold");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> seeds;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const auto lo = parse_count(std::string_view(text).substr(0, dots), "seed");
        const auto hi = parse_count(std::string_view(text).substr(dots + 2), "seed");
        if (hi < lo) throw DomainError("seed range must be ascending");
        if (hi - lo > 1'000'000) throw DomainError("seed range too long");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        seeds.push_back(parse_count(rest.substr(0, comma), "seed"));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return seeds;
}

// ---------------------------------------------------------------- area

struct AreaArgs {
    std::string psi;
    std::string n = "1";
    std::string samples = "1e6";
};

int run_area(const GlobalOptions& g, const AreaArgs& a)
{
    const auto psi = PsiSpec::parse(a.psi);
    const auto n = parse_count(a.n, "--n");
    const auto samples = parse_count(a.samples, "--samples");
    if (n < 1) throw DomainError("--n must be >= 1");
    const std::string format = resolve_format(g, "csv");

    const double psi_n = psi(n);
    const auto shifts = g.shifts()(n);
    const double exact = region_area_exact(psi_n);
    const auto est =
        region_area_mc(Region::full(n, shifts, psi_n), samples, g.seed, g.threads);
    const double z = est.std_error > 0.0 ? (est.mean - exact) / est.std_error
                                          : (est.mean == exact ? 0.0 : std::copysign(INFINITY, est.mean - exact));

    auto echo = base_echo(g, "area", format);
    echo.add("psi", psi.to_string()).add("n", std::to_string(n)).add("samples", std::to_string(samples));

    Output out(g.out);
    auto& os = out.stream();
    if (format == "csv") {
        echo.write_csv_header(os);
        os << "psi_n,gamma,delta,formula,mc_mean,mc_std_error,samples,z_score\n";
        os << fmt::format("{},{},{},{},{},{},{},{}\n", real(psi_n), real(shifts.gamma),
                          real(shifts.delta), real(exact), real(est.mean), real(est.std_error),
                          est.samples, real(z));
    } else {
        json j;
        j["config"] = echo.to_json();
        j["psi_n"] = psi_n;
        j["shifts"] = {shifts.gamma, shifts.delta};
        j["formula"] = exact;
        j["mc"] = {{"mean", est.mean}, {"std_error", est.std_error}, {"samples", est.samples}};
        j["z_score"] = std::isfinite(z) ? json(z) : json(nullptr);
        os << j.dump(format == "json" ? 2 : -1) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------- cover

struct CoverArgs {
    std::string n_regions;
    std::string psi;
    std::string grid;
    std::string target = "full";
    bool certify = false;
    std::string epsilon;
    double offset = 0.0;
    double margin = 0.01;
    double slack = -1.0;
    std::uint64_t m_min = 1;
    std::size_t witnesses = 16;
};

GridSpec parse_grid(const std::string& text, double offset)
{
    if (text.rfind("spacing:", 0) == 0)
        return GridSpec::spacing(parse_real(std::string_view(text).substr(8), "grid spacing"),
                                 offset);
    return GridSpec::resolution(parse_count(text, "grid resolution"), offset);
}

int run_cover(const GlobalOptions& g, const CoverArgs& a)
{
    const auto psi = PsiSpec::parse(a.psi);
    const auto n = parse_count(a.n_regions, "--N");
    const auto shifts = g.shifts();

    if (a.certify) {
        const std::string format = resolve_format(g, "csv");
        CertifyOptions opts;
        opts.margin = a.margin;
        opts.slack = a.slack < 0.0 ? 1e-12 : a.slack;
        opts.offset = a.offset;
        opts.budget = g.budget_value();
        opts.threads = g.threads;
        opts.m_min = a.m_min;
        const auto cert = certify_cover(n, shifts, psi, opts);
        auto echo = base_echo(g, "cover --certify", format);
        echo.add("psi", psi.to_string()).add("N", std::to_string(n));
        Output out(g.out);
        auto& os = out.stream();
        if (format == "csv") {
            echo.write_csv_header(os);
            os << cert.to_text();
        } else {
            json j = cert.to_json();
            j["config"] = echo.to_json();
            os << j.dump(format == "json" ? 2 : -1) << '\n';
        }
        return cert.verdict == Verdict::Certified ? kExitOk : kExitNegative;
    }

    const std::string format = resolve_format(g, "json");
    SweepOptions opts;
    opts.budget = g.budget_value();
    opts.threads = g.threads;
    opts.witness_cap = a.witnesses;
    opts.slack = a.slack < 0.0 ? 0.0 : a.slack;
    opts.m_min = a.m_min;

    CoverageReport report;
    auto echo = base_echo(g, "cover", format);
    echo.add("psi", psi.to_string()).add("N", std::to_string(n)).add("m_min", std::to_string(a.m_min));
    if (!a.epsilon.empty()) {
        if (!a.grid.empty()) throw DomainError("--epsilon selects the proof grid; drop --grid");
        const double eps = parse_real(a.epsilon, "--epsilon");
        report = proof_grid_experiment(n, eps, shifts, psi, opts);
        echo.add("grid", fmt::format("proof resolution floor(N^(2+eps/2)) = {}",
                                     proof_grid_resolution(n, eps)))
            .add("epsilon", a.epsilon)
            .add("target", "shrunk");
    } else {
        if (a.grid.empty()) throw DomainError("cover needs --grid, --epsilon or --certify");
        CoverTarget target;
        if (a.target == "full")
            target = CoverTarget::Full;
        else if (a.target == "shrunk")
            target = CoverTarget::Shrunk;
        else
            throw DomainError("--target must be full or shrunk");
        report = coverage_sweep(n, shifts, psi, parse_grid(a.grid, a.offset), target, opts);
        echo.add("grid", a.grid).add("offset", real(a.offset)).add("target", a.target);
    }

    Output out(g.out);
    auto& os = out.stream();
    if (format == "csv") {
        echo.write_csv_header(os);
        os << fmt::format("# covered_count: {}\n# uncovered_count: {}\n", report.covered_count,
                          report.uncovered_count);
        os << "alpha,beta,nearest_miss,nearest_m\n";
        for (const auto& w : report.uncovered_witnesses)
            os << fmt::format("{},{},{},{}\n", real(w.point.x()), real(w.point.y()),
                              real(w.nearest_miss), w.nearest_m);
    } else {
        json j = report.to_json();
        j["config"] = echo.to_json();
        os << j.dump(format == "json" ? 2 : -1) << '\n';
    }
    return report.uncovered_count == 0 ? kExitOk : kExitNegative;
}

// ---------------------------------------------------------------- liminf

struct LiminfArgs {
    std::string alpha;
    std::string beta;
    std::string named;
    std::string n_max = "1e6";
    std::string stride = "1";
    bool compare = false;
};

int run_liminf(const GlobalOptions& g, const LiminfArgs& a)
{
    std::optional<PointSpec> spec;
    if (!a.named.empty()) {
        if (!a.alpha.empty() || !a.beta.empty())
            throw DomainError("use either --named or --alpha/--beta");
        spec = PointSpec::parse("named:" + a.named);
    } else {
        if (a.alpha.empty() || a.beta.empty())
            throw DomainError("liminf needs --alpha and --beta, or --named");
        spec = PointSpec::explicit_point(parse_real(a.alpha, "--alpha"), parse_real(a.beta, "--beta"));
    }
    const auto point = spec->resolve().front();
    const auto n_max = parse_count(a.n_max, "--N");
    TrajectoryOptions opts;
    opts.stride = parse_count(a.stride, "--stride");
    opts.precision = parse_precision(g.precision);
    opts.budget = g.budget_value();
    const std::string format = resolve_format(g, "csv");

    auto echo = base_echo(g, a.compare ? "liminf --compare-deterministic" : "liminf", format);
    echo.add("point", spec->to_string())
        .add("alpha", real(point.alpha))
        .add("beta", real(point.beta))
        .add("N", std::to_string(n_max))
        .add("stride", std::to_string(opts.stride));

    Output out(g.out);
    auto& os = out.stream();
    const auto shifts = g.shifts();

    if (a.compare) {
        const auto cmp = compare_deterministic(point, shifts, n_max, opts);
        if (format == "csv") {
            echo.write_csv_header(os);
            os << "n,randomized,deterministic,gallagher,randomized_min,deterministic_min,"
                  "gallagher_min\n";
            for (const auto& r : cmp.rows)
                os << fmt::format("{},{},{},{},{},{},{}\n", r.n, real(r.randomized),
                                  real(r.deterministic), real(r.gallagher), real(r.randomized_min),
                                  real(r.deterministic_min), real(r.gallagher_min));
            os << fmt::format("# randomized_min: {}\n# deterministic_min: {} (n = {})\n"
                              "# gallagher_min: {}\n",
                              real(cmp.randomized_min), real(cmp.deterministic_min),
                              cmp.deterministic_argmin_n, real(cmp.gallagher_min));
        } else {
            json j;
            j["config"] = echo.to_json();
            j["randomized_min"] = cmp.randomized_min;
            j["deterministic_min"] = cmp.deterministic_min;
            j["deterministic_argmin_n"] = cmp.deterministic_argmin_n;
            j["gallagher_min"] = cmp.gallagher_min;
            j["rows"] = json::array();
            for (const auto& r : cmp.rows)
                j["rows"].push_back({r.n, r.randomized, r.deterministic, r.gallagher,
                                     r.randomized_min, r.deterministic_min, r.gallagher_min});
            os << j.dump(format == "json" ? 2 : -1) << '\n';
        }
        return kExitOk;
    }

    const std::string started = utc_timestamp();
    const auto traj = liminf_trajectory(point, shifts, n_max, opts);
    if (format == "csv") {
        echo.write_csv_header(os);
        os << "n,s_n,running_min\n";
        for (const auto& c : traj.checkpoints)
            os << fmt::format("{},{},{}\n", c.n, real(c.value), real(c.running_min));
        const auto& s = traj.summary;
        os << fmt::format("# final_running_min: {} (n = {})\n# window_min: {} (n = {}, window "
                          "[{}, {}])\n",
                          real(s.final_running_min), s.argmin_n, real(s.window_min),
                          s.window_argmin_n, std::max<std::uint64_t>(2, n_max / 2), n_max);
    } else if (format == "json") {
        json j;
        j["config"] = echo.to_json();
        j["summary"] = traj.summary.to_json();
        j["checkpoints"] = json::array();
        for (const auto& c : traj.checkpoints)
            j["checkpoints"].push_back({c.n, c.value, c.running_min});
        os << j.dump(2) << '\n';
    } else {
        BatchConfig cfg;
        cfg.points = *spec;
        cfg.seeds = {g.seed};
        cfg.n_max = n_max;
        cfg.threshold = std::numeric_limits<double>::infinity();
        cfg.precision = opts.precision;
        cfg.zero_shifts = g.zero_shifts;
        BatchSummary summary;
        summary.cells.push_back({0, point, g.seed, traj.summary});
        write_jsonl(os, make_run_records(cfg, summary, started, utc_timestamp()));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- batch

struct BatchArgs {
    std::string points = "random:100";
    std::string seeds = "0..9";
    std::string n_max = "1e6";
    std::string threshold = "1.5";
    std::string psi = "paper:0.5";
    bool append = false;
};

int run_batch(const GlobalOptions& g, const BatchArgs& a)
{
    BatchConfig cfg;
    cfg.points = PointSpec::parse(a.points, g.seed);
    cfg.seeds = parse_seeds(a.seeds);
    cfg.n_max = parse_count(a.n_max, "--N");
    cfg.threshold = parse_threshold(a.threshold);
    cfg.psi = PsiSpec::parse(a.psi);
    cfg.precision = parse_precision(g.precision);
    cfg.zero_shifts = g.zero_shifts;
    cfg.budget = g.budget_value();
    cfg.threads = g.threads;
    const std::string format = resolve_format(g, "csv");

    const std::string started = utc_timestamp();
    const auto summary = batch_liminf(cfg);
    const std::string finished = utc_timestamp();

    auto echo = base_echo(g, "batch", format);
    echo.add("points", cfg.points.to_string())
        .add("seeds", a.seeds)
        .add("N", std::to_string(cfg.n_max))
        .add("threshold", a.threshold)
        .add("psi", cfg.psi.to_string());

    Output out(g.out, format == "jsonl" && a.append);
    auto& os = out.stream();
    const auto& q = summary.running_min_quantiles;
    if (format == "csv") {
        echo.write_csv_header(os);
        os << fmt::format("# cells: {}\n# fraction_below_threshold: {}\n", summary.cells.size(),
                          real(summary.fraction_below));
        os << fmt::format("# running_min quantiles: min {} q10 {} q25 {} median {} q75 {} q90 {} "
                          "max {}\n",
                          real(q.min), real(q.q10), real(q.q25), real(q.median), real(q.q75),
                          real(q.q90), real(q.max));
        summary.write_csv(os);
    } else if (format == "json") {
        json j = summary.to_json();
        j["config"] = echo.to_json();
        os << j.dump(2) << '\n';
    } else {
        write_jsonl(os, make_run_records(cfg, summary, started, finished));
    }
    return kExitOk;
}

// ---------------------------------------------------------------- condition

struct ConditionArgs {
    std::string psi;
    std::string epsilon;
    std::string n_max = "1e6";
    bool feasible = false;
    std::string delta;
    std::string fit_from;
    std::string failure_at;
    std::uint64_t m_min = 1;
};

int run_condition(const GlobalOptions& g, const ConditionArgs& a)
{
    if (a.feasible) {
        if (a.delta.empty()) throw DomainError("--feasible needs --delta");
        const auto iv = epsilon_feasible(parse_real(a.delta, "--delta"));
        Output out(g.out);
        out.stream() << fmt::format("({}, {})\n", iv.lower, iv.upper);
        return kExitOk;
    }
    if (a.psi.empty() || a.epsilon.empty())
        throw DomainError("condition needs --psi and --epsilon (or --feasible --delta)");
    const auto psi = PsiSpec::parse(a.psi);
    const double eps = parse_real(a.epsilon, "--epsilon");
    const auto n_max = parse_count(a.n_max, "--Nmax");
    if (static_cast<double>(n_max) > g.budget_value())
        throw BudgetExceeded("condition trace exceeds budget", static_cast<double>(n_max),
                             g.budget_value());
    const std::string format = resolve_format(g, "csv");

    const auto trace = condition_trace(psi, eps, n_max);
    const auto records = trace.records();
    const auto eqfast = eqfast_check(trace, psi);

    auto echo = base_echo(g, "condition", format);
    echo.add("psi", psi.to_string()).add("epsilon", a.epsilon).add("Nmax", std::to_string(n_max));

    std::optional<SlopeFit> fit;
    const std::uint64_t fit_lo =
        a.fit_from.empty() ? std::max<std::uint64_t>(1, n_max / 10) : parse_count(a.fit_from, "--fit-from");
    if (n_max >= 3 && fit_lo < n_max) fit = fit_log_u_slope(trace, fit_lo, n_max);

    std::optional<FailureBound> bound;
    std::uint64_t bound_n = 0;
    if (!a.failure_at.empty()) {
        bound_n = parse_count(a.failure_at, "--failure-at");
        bound = failure_bound(bound_n, psi, eps, 0, a.m_min);
    }

    std::string verdict = "no growth visible in this window";
    if (fit && fit->slope > 0.0)
        verdict = "consistent with divergence (log u_n increasing over the fit window)";

    Output out(g.out);
    auto& os = out.stream();
    if (format == "csv") {
        echo.write_csv_header(os);
        os << fmt::format("# records: {} (last {})\n", records.size(), records.back());
        if (fit)
            os << fmt::format("# slope of log_u vs log n over [{}, {}]: {}\n", fit_lo, n_max,
                              real(fit->slope));
        if (psi.is_paper())
            os << fmt::format("# asymptotic slope (4-eps)(1+delta)-(4+eps): {}\n",
                              real(asymptotic_slope(psi.paper_delta(), eps)));
        os << "# " << verdict << '\n';
        os << fmt::format("# eqfast: {} records checked, largest violating record: {}\n",
                          eqfast.entries.size(),
                          eqfast.largest_violation ? std::to_string(*eqfast.largest_violation)
                                                   : std::string("none"));
        if (bound)
            os << fmt::format("# failure bound at n={} (m >= {}): log product form {}, log exp "
                              "form {}\n",
                              bound_n, a.m_min, real(bound->log_product_form),
                              real(bound->log_exp_form));
        trace.write_csv(os);
    } else {
        json j;
        j["config"] = echo.to_json();
        j["records"] = records;
        j["verdict"] = verdict;
        if (fit) j["slope_fit"] = {{"from", fit_lo}, {"to", n_max}, {"slope", fit->slope},
                                   {"intercept", fit->intercept}};
        if (psi.is_paper()) j["asymptotic_slope"] = asymptotic_slope(psi.paper_delta(), eps);
        j["eqfast"] = {{"checked", eqfast.entries.size()},
                       {"largest_violation", eqfast.largest_violation
                                                 ? json(*eqfast.largest_violation)
                                                 : json(nullptr)}};
        if (bound) {
            auto finite = [](double x) { return std::isfinite(x) ? json(x) : json("-inf"); };
            j["failure_bound"] = {{"n", bound_n},
                                  {"m_min", a.m_min},
                                  {"log_product_form", finite(bound->log_product_form)},
                                  {"log_exp_form", finite(bound->log_exp_form)}};
        }
        os << j.dump(format == "json" ? 2 : -1) << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"randlitt: randomized Littlewood covering experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    app.footer(std::string(kPsiGrammar) +
               "\nexit codes: 0 success, 1 negative verdict, 2 usage/domain error, 3 budget");

    GlobalOptions g;
    app.add_option("--seed", g.seed, "64-bit seed for the shift stream")->default_val(0);
    app.add_option("--out", g.out, "write primary output to this path");
    app.add_option("--format", g.format, "csv | json | jsonl");
    app.add_option("--budget", g.budget, "maximum membership tests / evaluations")
        ->default_val("1e10");
    app.add_option("--precision", g.precision, "double | high")->default_val("double");
    app.add_option("--threads", g.threads, "worker cap (0 = all cores)")->default_val(0);
    app.add_flag("--debug-zero-shifts", g.zero_shifts,
                 "use gamma = delta = 0 (non-random, for exact cases)")
        ->group("");

    AreaArgs area;
    auto* area_cmd = app.add_subcommand("area", "region measure: closed form and Monte Carlo");
    area_cmd->add_option("--psi", area.psi, kPsiGrammar)->required();
    area_cmd->add_option("--n", area.n, "region index")->default_val("1");
    area_cmd->add_option("--samples", area.samples, "Monte Carlo samples")->default_val("1e6");

    CoverArgs cover;
    auto* cover_cmd = app.add_subcommand("cover", "grid coverage sweeps and cover certificates");
    cover_cmd->add_option("--N", cover.n_regions, "union over m <= N")->required();
    cover_cmd->add_option("--psi", cover.psi, kPsiGrammar)->required();
    cover_cmd->add_option("--grid", cover.grid, "<Q> or spacing:<h>");
    cover_cmd->add_option("--offset", cover.offset, "grid offset eta in [0,1)")->default_val(0.0);
    cover_cmd->add_option("--target", cover.target, "full | shrunk")->default_val("full");
    cover_cmd->add_flag("--certify", cover.certify, "derive spacing from the separation radius");
    cover_cmd->add_option("--epsilon", cover.epsilon, "sweep the floor(N^(2+eps/2)) proof grid");
    cover_cmd->add_option("--margin", cover.margin, "certificate spacing margin")->default_val(0.01);
    cover_cmd->add_option("--slack", cover.slack,
                          "membership slack (default 1e-12 when certifying, else 0)");
    cover_cmd->add_option("--m-min", cover.m_min, "first region index in the union")
        ->default_val(1);
    cover_cmd->add_option("--witnesses", cover.witnesses, "uncovered witnesses to keep")
        ->default_val(16);

    LiminfArgs liminf;
    auto* liminf_cmd = app.add_subcommand("liminf", "running-minimum trajectory for one point");
    liminf_cmd->add_option("--alpha", liminf.alpha);
    liminf_cmd->add_option("--beta", liminf.beta);
    liminf_cmd->add_option("--named", liminf.named, "pair of golden|silver|cbrt2, e.g. golden,silver");
    liminf_cmd->add_option("--N", liminf.n_max)->default_val("1e6");
    liminf_cmd->add_option("--stride", liminf.stride, "emit every stride-th n")->default_val("1");
    liminf_cmd->add_flag("--compare-deterministic", liminf.compare,
                         "add unshifted n log n and n log^2 n columns");

    BatchArgs batch;
    auto* batch_cmd = app.add_subcommand("batch", "running minima over many points and seeds");
    batch_cmd->add_option("--points", batch.points, "random:<count>[:<seed>] | named:a,b | explicit:a,b")
        ->default_val("random:100");
    batch_cmd->add_option("--seeds", batch.seeds, "a..b or comma list")->default_val("0..9");
    batch_cmd->add_option("--N", batch.n_max)->default_val("1e6");
    batch_cmd->add_option("--threshold", batch.threshold, "count cells with min <= threshold")
        ->default_val("1.5");
    batch_cmd->add_option("--psi", batch.psi, "recorded with each run")->default_val("paper:0.5");
    batch_cmd->add_flag("--append", batch.append, "append to --out (jsonl)");

    ConditionArgs cond;
    auto* cond_cmd = app.add_subcommand("condition", "divergence-condition diagnostics");
    cond_cmd->add_option("--psi", cond.psi, kPsiGrammar);
    cond_cmd->add_option("--epsilon", cond.epsilon);
    cond_cmd->add_option("--Nmax", cond.n_max)->default_val("1e6");
    cond_cmd->add_flag("--feasible", cond.feasible, "print the feasible epsilon interval");
    cond_cmd->add_option("--delta", cond.delta, "paper-family delta for --feasible");
    cond_cmd->add_option("--fit-from", cond.fit_from, "slope fit start (default Nmax/10)");
    cond_cmd->add_option("--failure-at", cond.failure_at, "also evaluate the failure bound at n");
    cond_cmd->add_option("--m-min", cond.m_min, "first index in the failure bound")->default_val(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*area_cmd) return run_area(g, area);
        if (*cover_cmd) return run_cover(g, cover);
        if (*liminf_cmd) return run_liminf(g, liminf);
        if (*batch_cmd) return run_batch(g, batch);
        if (*cond_cmd) return run_condition(g, cond);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget refusal: " << e.what() << fmt::format(" (rerun with --budget {:.3e})\n", e.required());
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
