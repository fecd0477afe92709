#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "randlitt/number.hpp"
#include "randlitt/psi.hpp"

namespace randlitt {

/// A point (alpha, beta) of the unit square / torus.
using Point = Eigen::Vector2d;

enum class RegionKind { Full, Shrunk };

/// Amount by which shrunk regions lower the threshold: 1 / (n log^2 n).
double shrink_amount(std::uint64_t n_ambient);

/// The neighbourhood of the shifted lattice {((a + gamma)/n, (b + delta)/n)}
///
///   |alpha - (gamma + a)/n| * |beta - (delta + b)/n| <= threshold / n^2
///
/// for some integers a, b. Since both factors are minimised independently by
/// the nearest lattice point, membership reduces to
/// ||n alpha - gamma|| * ||n beta - delta|| <= threshold.
///
/// A Full region uses threshold = psi(n). A Shrunk region with ambient index
/// N uses psi(n) - 1/(N log^2 N); a nonpositive value makes the region empty.
class Region {
public:
    static Region full(std::uint64_t n, ShiftPair shifts, double psi_value);
    static Region shrunk(std::uint64_t m, std::uint64_t n_ambient, ShiftPair shifts,
                         double psi_m);

    /// Scaled product ||n alpha - gamma|| * ||n beta - delta||.
    double product(const Point& p) const
    {
        const double nn = static_cast<double>(n_);
        const double u = nn * p.x() - shifts_.gamma;
        const double v = nn * p.y() - shifts_.delta;
        return std::abs(u - std::nearbyint(u)) * std::abs(v - std::nearbyint(v));
    }

    /// Closed inequality; `slack` >= 0 tightens it to product <= threshold - slack.
    bool contains(const Point& p, double slack = 0.0) const
    {
        return !empty_ && product(p) <= threshold_ - slack;
    }

    std::uint64_t n() const { return n_; }
    ShiftPair shifts() const { return shifts_; }
    double threshold() const { return threshold_; }
    RegionKind kind() const { return kind_; }
    /// Ambient index of a shrunk region (0 for full regions).
    std::uint64_t n_ambient() const { return n_ambient_; }
    bool empty() const { return empty_; }

private:
    Region(std::uint64_t n, ShiftPair shifts, double threshold, RegionKind kind,
           std::uint64_t n_ambient, bool empty)
        : n_(n), shifts_(shifts), threshold_(threshold), kind_(kind), n_ambient_(n_ambient),
          empty_(empty) {}

    std::uint64_t n_;
    ShiftPair shifts_;
    double threshold_;
    RegionKind kind_;
    std::uint64_t n_ambient_;
    bool empty_;
};

/// Lebesgue measure of a full region with threshold psi:
/// 4 psi log(1/psi) - 4 (log 4 - 1) psi for psi < 1/4, and 1 otherwise.
/// Independent of n and of the shifts.
double region_area_exact(double psi);

struct AreaEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Bernoulli Monte Carlo estimate of the region's measure from uniform,
/// index-keyed samples of the unit square.
AreaEstimate region_area_mc(const Region& region, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads = 0);

/// 1 / (n^2 log^2 n): a point outside every A_m (m <= n) keeps a ball of this
/// radius disjoint from every B_m^(n).
double separation_radius(std::uint64_t n);

struct BoundaryGap {
    /// Smallest sampled distance from the boundary of A_m to B_m^(n), in torus
    /// units. +inf when either no point lies outside A_m or B_m^(n) is empty.
    double gap = 0.0;
    /// Location of the minimising boundary probe.
    Point argmin = Point::Zero();
    /// |m alpha - gamma - a| at the minimiser: 1/2 (or 2 psi) at the tail ends,
    /// sqrt(psi) at the hyperbola vertex.
    double argmin_offset = 0.0;
    std::uint64_t probes = 0;
};

/// Samples `probe_count` points along the boundary hyperbola of A_m and
/// measures each one's exact distance to the shrunk region B_m^(n).
BoundaryGap min_boundary_gap(std::uint64_t m, std::uint64_t n, ShiftPair shifts,
                             const PsiSpec& psi, std::uint64_t probe_count);

/// Distance from (x, y), x, y >= 0, to {(u, v) : u, v >= 0, u v <= c}.
/// Exposed for testing.
double distance_to_hyperbolic_region(double x, double y, double c);

} // namespace randlitt
