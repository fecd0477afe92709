#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "randlitt/errors.hpp"
#include "randlitt/number.hpp"
#include "randlitt/psi.hpp"
#include "randlitt/region.hpp"

namespace randlitt {

/// Square lattice of sample points in [0,1)^2.
///  - Resolution(Q): ((a + eta)/Q, (b + eta)/Q), a, b in {0..Q-1}
///  - Spacing(h):    ((i + eta) h, (j + eta) h), i, j in {0..ceil(1/h)-1}
class GridSpec {
public:
    enum class Mode { Resolution, Spacing };

    static GridSpec resolution(std::uint64_t q, double offset = 0.0);
    static GridSpec spacing(double h, double offset = 0.0);

    Mode mode() const { return mode_; }
    /// Points per axis.
    std::uint64_t side() const { return side_; }
    std::uint64_t point_count() const { return side_ * side_; }
    /// Distance between neighbouring points.
    double pitch() const { return pitch_; }
    double offset() const { return offset_; }

    /// Coordinate of index i along an axis.
    double coordinate(std::uint64_t i) const
    {
        return (static_cast<double>(i) + offset_) * pitch_;
    }
    Point point(std::uint64_t i, std::uint64_t j) const
    {
        return Point(coordinate(i), coordinate(j));
    }

    nlohmann::json to_json() const;

private:
    GridSpec(Mode mode, std::uint64_t side, double pitch, double offset)
        : mode_(mode), side_(side), pitch_(pitch), offset_(offset) {}

    Mode mode_;
    std::uint64_t side_;
    double pitch_;
    double offset_;
};

enum class CoverTarget { Full, Shrunk };

struct SweepOptions {
    /// Maximum number of point-region membership tests.
    double budget = kDefaultBudget;
    unsigned threads = 0;
    std::size_t witness_cap = 16;
    /// Membership requires product <= threshold - slack.
    double slack = 0.0;
    /// First region index in the union (regions m < m_min are left out).
    std::uint64_t m_min = 1;
};

/// An uncovered grid point with its closest approach to being covered.
struct Witness {
    Point point = Point::Zero();
    /// min over m of (product_m - threshold_m); positive for an uncovered point.
    double nearest_miss = 0.0;
    /// Region index attaining nearest_miss (0 if every region is empty).
    std::uint64_t nearest_m = 0;
};

struct CoverageReport {
    std::uint64_t n_regions = 0; ///< N: union over m = m_min..N
    std::uint64_t m_min = 1;
    std::uint64_t n_ambient = 0; ///< N for shrunk targets, 0 for full
    GridSpec grid = GridSpec::resolution(2);
    CoverTarget target = CoverTarget::Full;
    std::uint64_t seed = 0;
    bool zero_shifts = false;
    std::string psi;
    double slack = 0.0;
    std::uint64_t covered_count = 0;
    std::uint64_t uncovered_count = 0;
    /// Lexicographically smallest uncovered points, at most witness_cap.
    std::vector<Witness> uncovered_witnesses;
    /// first_cover[m] = number of grid points whose smallest covering index is m.
    std::vector<std::uint64_t> first_cover;

    nlohmann::json to_json() const;
};

/// The regions m = m_min..N of the requested target, materialised once.
std::vector<Region> build_regions(std::uint64_t n_regions, const ShiftStream& shifts,
                                  const PsiSpec& psi, CoverTarget target, std::uint64_t m_min = 1);

/// Classifies every grid point by membership in the union of regions
/// m = m_min..N (ascending m, early exit at the first covering region).
/// Throws BudgetExceeded when point_count * region count exceeds the budget.
CoverageReport coverage_sweep(std::uint64_t n_regions, const ShiftStream& shifts,
                              const PsiSpec& psi, const GridSpec& grid, CoverTarget target,
                              const SweepOptions& options = {});

/// Rechecks a point against the union; returns true if some region covers it.
bool union_contains(const std::vector<Region>& regions, const Point& p, double slack = 0.0);

enum class Verdict { Certified, Failed };

struct CertifyOptions {
    double margin = 0.01;
    double slack = 1e-12;
    double offset = 0.0;
    double budget = kDefaultBudget;
    unsigned threads = 0;
    std::uint64_t m_min = 1;
};

struct Certificate {
    std::uint64_t n_regions = 0;
    std::uint64_t m_min = 1;
    std::uint64_t seed = 0;
    bool zero_shifts = false;
    std::string psi;
    std::uint64_t n_ambient = 0;
    double spacing = 0.0;
    double margin = 0.0;
    double offset = 0.0;
    double slack = 0.0;
    double separation_radius = 0.0;
    double covering_radius = 0.0; ///< spacing * sqrt(2) / 2
    std::uint64_t grid_side = 0;
    Verdict verdict = Verdict::Failed;
    std::optional<Witness> witness;

    nlohmann::json to_json() const;
    /// Human-readable block listing every parameter.
    std::string to_text() const;
};

/// Sweeps a Spacing(h) grid with h = separation_radius(N) sqrt(2) (1 - margin)
/// against the shrunk regions B_m^(N). Certified means every grid point is in
/// the shrunk union, which implies that every point of [0,1)^2 lies in the
/// union of the full regions A_m, m <= N (up to the recorded float slack).
Certificate certify_cover(std::uint64_t n_regions, const ShiftStream& shifts, const PsiSpec& psi,
                          const CertifyOptions& options = {});

/// Membership tests needed by certify_cover at N.
double certify_cost(std::uint64_t n_regions, const CertifyOptions& options = {});

/// Scans N = 2, 3, ... while certify_cover fits in the budget and returns the
/// first Certified certificate, or nullopt if none is reached.
std::optional<Certificate> smallest_certified(const ShiftStream& shifts, const PsiSpec& psi,
                                              const CertifyOptions& options = {},
                                              std::uint64_t n_limit = 1'000'000);

/// floor(n^(2 + epsilon/2)).
std::uint64_t proof_grid_resolution(std::uint64_t n, double epsilon);

/// Sweeps the Resolution(floor(n^(2+eps/2))) grid against the shrunk regions
/// B_m^(n), m <= n. Every uncovered point is one of the "bad grid point" events.
CoverageReport proof_grid_experiment(std::uint64_t n, double epsilon, const ShiftStream& shifts,
                                     const PsiSpec& psi, const SweepOptions& options = {});

std::string to_string(CoverTarget t);
std::string to_string(Verdict v);

} // namespace randlitt
