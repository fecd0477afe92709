#include "randlitt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <limits>

#include <fmt/format.h>

#include "randlitt/counter_rng.hpp"
#include "randlitt/parallel.hpp"
#include "randlitt/parse.hpp"

namespace randlitt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_dist(double x) { return std::abs(x - std::nearbyint(x)); }

// Shared by every path so that all statistics agree bit for bit with
// littlewood_statistic: ((n log n) * ||.||) * ||.||.
double statistic_double(double weight, double nn, double alpha, double beta, ShiftPair s)
{
    return weight * norm_dist(nn * alpha - s.gamma) * norm_dist(nn * beta - s.delta);
}

double statistic_high(double weight, std::uint64_t n, const ResolvedPoint& p, ShiftPair s)
{
    return weight * (n * p.alpha_hp - Fraction128::from_double(s.gamma)).distance_to_integer() *
           (n * p.beta_hp - Fraction128::from_double(s.delta)).distance_to_integer();
}

double weight_of(std::uint64_t n)
{
    const double nn = static_cast<double>(n);
    return nn * std::log(nn);
}

class MinTracker {
public:
    explicit MinTracker(std::uint64_t n_max) : n_max_(n_max), window_start_(std::max<std::uint64_t>(2, n_max / 2)) {}

    void observe(std::uint64_t n, double s)
    {
        if (s < min_) {
            min_ = s;
            argmin_ = n;
        }
        if (n >= window_start_ && s < window_min_) {
            window_min_ = s;
            window_argmin_ = n;
        }
        if (n == next_decade_) {
            decades_.emplace_back(n, min_);
            next_decade_ *= 10;
        }
    }

    double running_min() const { return min_; }

    TrajectorySummary summary() const
    {
        TrajectorySummary out;
        out.n_max = n_max_;
        out.final_running_min = min_;
        out.argmin_n = argmin_;
        out.window_min = window_min_;
        out.window_argmin_n = window_argmin_;
        out.decade_minima = decades_;
        return out;
    }

private:
    std::uint64_t n_max_;
    std::uint64_t window_start_;
    double min_ = kInf;
    std::uint64_t argmin_ = 0;
    double window_min_ = kInf;
    std::uint64_t window_argmin_ = 0;
    std::uint64_t next_decade_ = 10;
    std::vector<std::pair<std::uint64_t, double>> decades_;
};

void check_trajectory_args(std::uint64_t n_max, const TrajectoryOptions& options,
                           double cells = 1.0)
{
    if (n_max < 2) throw DomainError("trajectory requires N >= 2");
    if (options.stride < 1) throw DomainError("stride must be >= 1");
    const double cost = cells * static_cast<double>(n_max - 1);
    if (cost > options.budget)
        throw BudgetExceeded(fmt::format("run needs {:.3e} statistic evaluations, budget is {:.3e}",
                                         cost, options.budget),
                             cost, options.budget);
}

nlohmann::json finite_or_null(double x)
{
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

ResolvedPoint explicit_resolved(double alpha, double beta, std::string label)
{
    ResolvedPoint p;
    p.label = std::move(label);
    p.alpha = alpha;
    p.beta = beta;
    p.alpha_hp = Fraction128::from_double(alpha);
    p.beta_hp = Fraction128::from_double(beta);
    p.spec = {{"kind", "explicit"}, {"alpha", alpha}, {"beta", beta}};
    return p;
}

ResolvedPoint named_resolved(NamedConstant a, NamedConstant b)
{
    ResolvedPoint p;
    p.label = fmt::format("{},{}", to_string(a), to_string(b));
    p.alpha_hp = named_fraction(a);
    p.beta_hp = named_fraction(b);
    p.alpha = p.alpha_hp.to_double();
    p.beta = p.beta_hp.to_double();
    p.spec = {{"kind", "named"},
              {"alpha_id", std::string(to_string(a))},
              {"beta_id", std::string(to_string(b))},
              {"alpha_closed_form", std::string(closed_form(a))},
              {"beta_closed_form", std::string(closed_form(b))},
              {"alpha", p.alpha},
              {"beta", p.beta},
              {"provenance", "exact integer root to 128 fractional bits, rounded to double"}};
    return p;
}

void require_unit(double x, const char* name)
{
    if (!(x >= 0.0 && x < 1.0))
        throw DomainError(fmt::format("{} must lie in [0, 1), got {}", name, x));
}

} // namespace

Precision parse_precision(std::string_view text)
{
    if (text == "double") return Precision::Double;
    if (text == "high") return Precision::High;
    throw DomainError("precision must be 'double' or 'high'");
}

std::string to_string(Precision p) { return p == Precision::Double ? "double" : "high"; }

ResolvedPoint resolve_point(const nlohmann::json& spec)
{
    const auto kind = spec.at("kind").get<std::string>();
    if (kind == "named")
        return named_resolved(parse_named_constant(spec.at("alpha_id").get<std::string>()),
                              parse_named_constant(spec.at("beta_id").get<std::string>()));
    if (kind == "explicit" || kind == "random") {
        const double a = spec.at("alpha").get<double>();
        const double b = spec.at("beta").get<double>();
        require_unit(a, "alpha");
        require_unit(b, "beta");
        auto p = explicit_resolved(a, b, kind == "explicit" ? "explicit" : "random");
        if (kind == "random") {
            p.spec = spec;
            p.label = fmt::format("random#{}", spec.at("index").get<std::uint64_t>());
        }
        return p;
    }
    throw DomainError("unknown point kind '" + kind + "'");
}

PointSpec PointSpec::explicit_point(double alpha, double beta)
{
    require_unit(alpha, "alpha");
    require_unit(beta, "beta");
    return PointSpec(Explicit{alpha, beta});
}

PointSpec PointSpec::named(NamedConstant alpha, NamedConstant beta)
{
    return PointSpec(Named{alpha, beta});
}

PointSpec PointSpec::random(std::uint64_t count, std::uint64_t seed)
{
    if (count < 1) throw DomainError("random point count must be >= 1");
    return PointSpec(Random{count, seed});
}

PointSpec PointSpec::parse(std::string_view text, std::uint64_t default_seed)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw DomainError(fmt::format("points: expected kind:params, got '{}'", text));
    const auto kind = text.substr(0, colon);
    const auto params = text.substr(colon + 1);
    if (kind == "random") {
        const auto sep = params.find(':');
        const auto count = parse_count(params.substr(0, sep), "point count");
        const auto seed =
            sep == std::string_view::npos ? default_seed : parse_count(params.substr(sep + 1), "point seed");
        return random(count, seed);
    }
    const auto comma = params.find(',');
    if (comma == std::string_view::npos)
        throw DomainError(fmt::format("points: expected two comma-separated values in '{}'", text));
    const auto first = params.substr(0, comma);
    const auto second = params.substr(comma + 1);
    if (kind == "explicit")
        return explicit_point(parse_real(first, "alpha"), parse_real(second, "beta"));
    if (kind == "named") return named(parse_named_constant(first), parse_named_constant(second));
    throw DomainError(fmt::format("points: unknown kind '{}' (explicit, named, random)", kind));
}

std::vector<ResolvedPoint> PointSpec::resolve() const
{
    if (const auto* e = std::get_if<Explicit>(&kind_))
        return {explicit_resolved(e->alpha, e->beta, "explicit")};
    if (const auto* n = std::get_if<Named>(&kind_)) return {named_resolved(n->alpha, n->beta)};
    const auto& r = std::get<Random>(kind_);
    const std::uint64_t key = stream_key(r.seed, stream_tag::kPoint);
    std::vector<ResolvedPoint> out;
    out.reserve(r.count);
    for (std::uint64_t i = 0; i < r.count; ++i) {
        auto p = explicit_resolved(counter_uniform(key, 2 * i), counter_uniform(key, 2 * i + 1),
                                   fmt::format("random#{}", i));
        p.spec = {{"kind", "random"}, {"index", i},      {"point_seed", r.seed},
                  {"alpha", p.alpha}, {"beta", p.beta}};
        out.push_back(std::move(p));
    }
    return out;
}

std::string PointSpec::to_string() const
{
    if (const auto* e = std::get_if<Explicit>(&kind_))
        return fmt::format("explicit:{},{}", e->alpha, e->beta);
    if (const auto* n = std::get_if<Named>(&kind_))
        return fmt::format("named:{},{}", randlitt::to_string(n->alpha), randlitt::to_string(n->beta));
    const auto& r = std::get<Random>(kind_);
    return fmt::format("random:{}:{}", r.count, r.seed);
}

double TrajectorySummary::running_min_at(std::uint64_t n) const
{
    for (const auto& [at, value] : decade_minima)
        if (at == n) return value;
    throw DomainError(fmt::format("no running-minimum checkpoint at n = {}", n));
}

nlohmann::json TrajectorySummary::to_json() const
{
    nlohmann::json j;
    j["N"] = n_max;
    j["n0"] = 2;
    j["final_running_min"] = final_running_min;
    j["argmin_n"] = argmin_n;
    j["window"] = {n_max / 2 < 2 ? 2 : n_max / 2, n_max};
    j["window_min"] = window_min;
    j["window_argmin_n"] = window_argmin_n;
    j["decade_minima"] = nlohmann::json::array();
    for (const auto& [n, v] : decade_minima) j["decade_minima"].push_back({n, v});
    return j;
}

TrajectorySummary TrajectorySummary::from_json(const nlohmann::json& j)
{
    TrajectorySummary s;
    s.n_max = j.at("N").get<std::uint64_t>();
    s.final_running_min = j.at("final_running_min").get<double>();
    s.argmin_n = j.at("argmin_n").get<std::uint64_t>();
    s.window_min = j.at("window_min").get<double>();
    s.window_argmin_n = j.at("window_argmin_n").get<std::uint64_t>();
    for (const auto& d : j.at("decade_minima"))
        s.decade_minima.emplace_back(d.at(0).get<std::uint64_t>(), d.at(1).get<double>());
    return s;
}

Trajectory liminf_trajectory(const ResolvedPoint& point, const ShiftStream& shifts,
                             std::uint64_t n_max, const TrajectoryOptions& options)
{
    check_trajectory_args(n_max, options);
    Trajectory out;
    MinTracker tracker(n_max);
    out.checkpoints.reserve(n_max / options.stride + 1);
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const double w = weight_of(n);
        const double s = options.precision == Precision::Double
                             ? statistic_double(w, static_cast<double>(n), point.alpha, point.beta,
                                                shifts(n))
                             : statistic_high(w, n, point, shifts(n));
        tracker.observe(n, s);
        if (n % options.stride == 0 || n == n_max)
            out.checkpoints.push_back({n, s, tracker.running_min()});
    }
    out.summary = tracker.summary();
    return out;
}

Comparison compare_deterministic(const ResolvedPoint& point, const ShiftStream& shifts,
                                 std::uint64_t n_max, const TrajectoryOptions& options)
{
    check_trajectory_args(n_max, options);
    Comparison out;
    out.randomized_min = out.deterministic_min = out.gallagher_min = kInf;
    const bool high = options.precision == Precision::High;
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const double w = weight_of(n);
        const double nn = static_cast<double>(n);
        const double r = high ? statistic_high(w, n, point, shifts(n))
                              : statistic_double(w, nn, point.alpha, point.beta, shifts(n));
        const double d = high ? statistic_high(w, n, point, ShiftPair{})
                              : statistic_double(w, nn, point.alpha, point.beta, ShiftPair{});
        const double g = d * std::log(nn);
        out.randomized_min = std::min(out.randomized_min, r);
        if (d < out.deterministic_min) {
            out.deterministic_min = d;
            out.deterministic_argmin_n = n;
        }
        out.gallagher_min = std::min(out.gallagher_min, g);
        if (n % options.stride == 0 || n == n_max)
            out.rows.push_back({n, r, d, g, out.randomized_min, out.deterministic_min,
                                out.gallagher_min});
    }
    return out;
}

Quantiles quantiles(std::vector<double> values)
{
    if (values.empty()) throw DomainError("quantiles of an empty sample");
    std::sort(values.begin(), values.end());
    auto at = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        if (frac == 0.0) return values[lo];
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {values.front(), at(0.1), at(0.25), at(0.5), at(0.75), at(0.9), values.back()};
}

BatchSummary batch_liminf(const BatchConfig& config)
{
    if (config.seeds.empty()) throw DomainError("batch requires at least one seed");
    const auto points = config.points.resolve();
    if (points.empty()) throw DomainError("batch requires at least one point");
    if (std::isnan(config.threshold)) throw DomainError("threshold must be a number");
    TrajectoryOptions opts;
    opts.precision = config.precision;
    opts.budget = config.budget;
    check_trajectory_args(config.n_max, opts,
                          static_cast<double>(points.size()) * static_cast<double>(config.seeds.size()));

    const std::uint64_t n_max = config.n_max;
    std::vector<double> weights(n_max + 1, 0.0);
    for (std::uint64_t n = 2; n <= n_max; ++n) weights[n] = weight_of(n);

    BatchSummary out;
    out.threshold = config.threshold;
    out.cells.resize(points.size() * config.seeds.size());
    std::vector<ShiftPair> table(n_max + 1);
    for (std::size_t si = 0; si < config.seeds.size(); ++si) {
        const auto stream =
            config.zero_shifts ? ShiftStream::zero() : ShiftStream(config.seeds[si]);
        parallel_blocks(n_max + 1, 64, config.threads,
                        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                            for (std::uint64_t n = begin; n < end; ++n) table[n] = stream(n);
                        });
        parallel_blocks(points.size(), points.size(), config.threads,
                        [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t pi = begin; pi < end; ++pi) {
                const auto& p = points[pi];
                MinTracker tracker(n_max);
                if (config.precision == Precision::Double) {
                    for (std::uint64_t n = 2; n <= n_max; ++n)
                        tracker.observe(n, statistic_double(weights[n], static_cast<double>(n),
                                                            p.alpha, p.beta, table[n]));
                } else {
                    for (std::uint64_t n = 2; n <= n_max; ++n)
                        tracker.observe(n, statistic_high(weights[n], n, p, table[n]));
                }
                auto& cell = out.cells[pi * config.seeds.size() + si];
                cell.point_index = pi;
                cell.point = p;
                cell.seed = config.seeds[si];
                cell.summary = tracker.summary();
            }
        });
    }

    std::vector<double> finals;
    finals.reserve(out.cells.size());
    for (const auto& c : out.cells) {
        finals.push_back(c.summary.final_running_min);
        if (c.summary.final_running_min <= config.threshold) ++out.count_below;
    }
    out.fraction_below =
        static_cast<double>(out.count_below) / static_cast<double>(out.cells.size());
    out.running_min_quantiles = quantiles(std::move(finals));
    return out;
}

nlohmann::json BatchSummary::to_json() const
{
    nlohmann::json j;
    j["cells"] = cells.size();
    j["threshold"] = finite_or_null(threshold);
    j["count_below"] = count_below;
    j["fraction_below"] = fraction_below;
    const auto& q = running_min_quantiles;
    j["running_min_quantiles"] = {{"min", q.min},       {"q10", q.q10}, {"q25", q.q25},
                                  {"median", q.median}, {"q75", q.q75}, {"q90", q.q90},
                                  {"max", q.max}};
    j["rows"] = nlohmann::json::array();
    for (const auto& c : cells)
        j["rows"].push_back({{"point", c.point.label},
                             {"alpha", c.point.alpha},
                             {"beta", c.point.beta},
                             {"seed", c.seed},
                             {"summary", c.summary.to_json()}});
    return j;
}

void BatchSummary::write_csv(std::ostream& out) const
{
    out << "point,alpha,beta,seed,final_running_min,argmin_n,window_min,window_argmin_n\n";
    for (const auto& c : cells)
        out << fmt::format("{},{:.17g},{:.17g},{},{:.17g},{},{:.17g},{}\n", c.point.label,
                           c.point.alpha, c.point.beta, c.seed, c.summary.final_running_min,
                           c.summary.argmin_n, c.summary.window_min, c.summary.window_argmin_n);
}

nlohmann::json RunRecord::to_json() const
{
    return {{"schema_version", kSchemaVersion},
            {"artifact_version", artifact_version},
            {"config", config},
            {"summary", summary.to_json()},
            {"started_at", started_at},
            {"finished_at", finished_at}};
}

RunRecord RunRecord::from_json(const nlohmann::json& j)
{
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
        throw DomainError(fmt::format("unsupported run-record schema version {}", version));
    RunRecord r;
    r.artifact_version = j.at("artifact_version").get<std::string>();
    r.config = j.at("config");
    r.summary = TrajectorySummary::from_json(j.at("summary"));
    r.started_at = j.at("started_at").get<std::string>();
    r.finished_at = j.at("finished_at").get<std::string>();
    return r;
}

std::vector<RunRecord> make_run_records(const BatchConfig& config, const BatchSummary& summary,
                                        const std::string& started_at,
                                        const std::string& finished_at)
{
    std::vector<RunRecord> out;
    out.reserve(summary.cells.size());
    for (const auto& c : summary.cells) {
        RunRecord r;
        r.artifact_version = RANDLITT_VERSION;
        r.started_at = started_at;
        r.finished_at = finished_at;
        r.config = {{"psi", config.psi.to_string()},
                    {"delta", finite_or_null(config.psi.paper_delta())},
                    {"seed", c.seed},
                    {"zero_shifts", config.zero_shifts},
                    {"N", config.n_max},
                    {"n0", 2},
                    {"precision", to_string(config.precision)},
                    {"point_spec", config.points.to_string()},
                    {"point", c.point.spec},
                    {"threshold", finite_or_null(config.threshold)}};
        r.summary = c.summary;
        out.push_back(std::move(r));
    }
    return out;
}

TrajectorySummary replay(const RunRecord& record)
{
    const auto& cfg = record.config;
    const auto point = resolve_point(cfg.at("point"));
    const auto shifts = cfg.at("zero_shifts").get<bool>()
                            ? ShiftStream::zero()
                            : ShiftStream(cfg.at("seed").get<std::uint64_t>());
    TrajectoryOptions opts;
    opts.precision = parse_precision(cfg.at("precision").get<std::string>());
    opts.stride = cfg.at("N").get<std::uint64_t>();
    return liminf_trajectory(point, shifts, cfg.at("N").get<std::uint64_t>(), opts).summary;
}

void write_jsonl(std::ostream& out, const std::vector<RunRecord>& records)
{
    for (const auto& r : records) out << r.to_json().dump() << '\n';
}

std::vector<RunRecord> read_jsonl(std::istream& in)
{
    std::vector<RunRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(RunRecord::from_json(nlohmann::json::parse(line)));
    }
    return out;
}

std::string utc_timestamp()
{
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace randlitt
