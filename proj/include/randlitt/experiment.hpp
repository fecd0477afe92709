#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "randlitt/errors.hpp"
#include "randlitt/number.hpp"
#include "randlitt/psi.hpp"

namespace randlitt {

enum class Precision { Double, High };

Precision parse_precision(std::string_view text);
std::string to_string(Precision p);

/// A fully resolved experiment point. The high-precision coordinates are the
/// 128-bit values (exact closed form for named constants, the double itself
/// otherwise); `alpha`/`beta` are their double roundings.
struct ResolvedPoint {
    std::string label;
    double alpha = 0.0;
    double beta = 0.0;
    Fraction128 alpha_hp;
    Fraction128 beta_hp;
    /// Enough to rebuild the point (used by run records).
    nlohmann::json spec;
};

/// Rebuilds a point from ResolvedPoint::spec.
ResolvedPoint resolve_point(const nlohmann::json& spec);

/// Which (alpha, beta) to run:
///   explicit:<alpha>,<beta>    coordinates in [0, 1)
///   named:<id>,<id>            ids golden, silver, cbrt2
///   random:<count>[:<seed>]    uniform points from a counter-keyed stream
class PointSpec {
public:
    struct Explicit { double alpha, beta; };
    struct Named { NamedConstant alpha, beta; };
    struct Random { std::uint64_t count, seed; };

    static PointSpec explicit_point(double alpha, double beta);
    static PointSpec named(NamedConstant alpha, NamedConstant beta);
    static PointSpec random(std::uint64_t count, std::uint64_t seed);
    /// `default_seed` is used by `random:<count>` without an explicit seed.
    static PointSpec parse(std::string_view text, std::uint64_t default_seed = 0);

    std::vector<ResolvedPoint> resolve() const;
    std::string to_string() const;

private:
    explicit PointSpec(std::variant<Explicit, Named, Random> k) : kind_(k) {}
    std::variant<Explicit, Named, Random> kind_;
};

/// One emitted trajectory sample. Statistics start at n0 = 2.
struct StatisticPoint {
    std::uint64_t n = 0;
    double value = 0.0;       ///< s_n
    double running_min = 0.0; ///< min_{2<=k<=n} s_k
};

struct TrajectorySummary {
    std::uint64_t n_max = 0;
    double final_running_min = 0.0;
    std::uint64_t argmin_n = 0;
    /// Minimum over the tail window [floor(N/2), N].
    double window_min = 0.0;
    std::uint64_t window_argmin_n = 0;
    /// Running minimum at each power of ten 10, 100, ... <= N.
    std::vector<std::pair<std::uint64_t, double>> decade_minima;

    /// Running minimum at n = 10^k; throws if that checkpoint was not reached.
    double running_min_at(std::uint64_t n) const;

    nlohmann::json to_json() const;
    static TrajectorySummary from_json(const nlohmann::json& j);
    friend bool operator==(const TrajectorySummary&, const TrajectorySummary&) = default;
};

struct TrajectoryOptions {
    std::uint64_t stride = 1;
    Precision precision = Precision::Double;
    double budget = kDefaultBudget;
};

struct Trajectory {
    /// Samples at n divisible by the stride, plus n = N.
    std::vector<StatisticPoint> checkpoints;
    TrajectorySummary summary;
};

/// Visits every n in [2, N] and tracks the running minimum of
/// s_n = n log n ||n alpha - gamma_n|| ||n beta - delta_n||.
Trajectory liminf_trajectory(const ResolvedPoint& point, const ShiftStream& shifts,
                             std::uint64_t n_max, const TrajectoryOptions& options = {});

struct ComparisonRow {
    std::uint64_t n = 0;
    double randomized = 0.0;    ///< n log n ||n a - g|| ||n b - d||
    double deterministic = 0.0; ///< n log n ||n a|| ||n b||
    double gallagher = 0.0;     ///< n log^2 n ||n a|| ||n b||
    double randomized_min = 0.0;
    double deterministic_min = 0.0;
    double gallagher_min = 0.0;
};

struct Comparison {
    std::vector<ComparisonRow> rows; ///< strided, plus n = N
    double randomized_min = 0.0;
    double deterministic_min = 0.0;
    double gallagher_min = 0.0;
    std::uint64_t deterministic_argmin_n = 0;
};

/// Aligned randomized and unshifted statistics; running minima cover every n.
Comparison compare_deterministic(const ResolvedPoint& point, const ShiftStream& shifts,
                                 std::uint64_t n_max, const TrajectoryOptions& options = {});

struct BatchConfig {
    PointSpec points = PointSpec::random(1, 0);
    std::vector<std::uint64_t> seeds;
    std::uint64_t n_max = 0;
    double threshold = 0.0;
    /// Recorded with each run; the statistic itself does not depend on psi.
    PsiSpec psi = PsiSpec::paper(0.5);
    Precision precision = Precision::Double;
    bool zero_shifts = false;
    double budget = kDefaultBudget;
    unsigned threads = 0;
};

struct BatchCell {
    std::size_t point_index = 0;
    ResolvedPoint point;
    std::uint64_t seed = 0;
    TrajectorySummary summary;
};

struct Quantiles {
    double min = 0.0, q10 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q90 = 0.0, max = 0.0;
};

/// Linear-interpolation quantiles (type 7) of a nonempty sample.
Quantiles quantiles(std::vector<double> values);

struct BatchSummary {
    std::vector<BatchCell> cells; ///< sorted by (point_index, seed)
    std::uint64_t count_below = 0;
    double fraction_below = 0.0; ///< share of cells with final running min <= threshold
    Quantiles running_min_quantiles;
    double threshold = 0.0;

    nlohmann::json to_json() const;
    /// One row per cell followed by nothing else; summary lives in the header.
    void write_csv(std::ostream& out) const;
};

/// Runs liminf_trajectory for every (point, seed) cell, in parallel.
BatchSummary batch_liminf(const BatchConfig& config);

/// Persisted outcome of one (point, seed) cell. Schema documented in
/// docs/run_record_schema.md.
struct RunRecord {
    static constexpr int kSchemaVersion = 1;

    nlohmann::json config;
    TrajectorySummary summary;
    std::string started_at;
    std::string finished_at;
    std::string artifact_version;

    nlohmann::json to_json() const;
    static RunRecord from_json(const nlohmann::json& j);
};

std::vector<RunRecord> make_run_records(const BatchConfig& config, const BatchSummary& summary,
                                        const std::string& started_at,
                                        const std::string& finished_at);

/// Recomputes the summary from the record's config.
TrajectorySummary replay(const RunRecord& record);

void write_jsonl(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_jsonl(std::istream& in);

/// ISO-8601 UTC time; honours SOURCE_DATE_EPOCH for reproducible output.
std::string utc_timestamp();

} // namespace randlitt
