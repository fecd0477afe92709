#include "randlitt/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <unsupported/Eigen/Polynomials>

#include "randlitt/counter_rng.hpp"
#include "randlitt/parallel.hpp"

namespace randlitt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap01(double x) { return x - std::floor(x); }

} // namespace

double shrink_amount(std::uint64_t n_ambient)
{
    if (n_ambient < 2) throw DomainError("shrunk regions need an ambient index >= 2");
    const double log_n = std::log(static_cast<double>(n_ambient));
    return 1.0 / (static_cast<double>(n_ambient) * log_n * log_n);
}

Region Region::full(std::uint64_t n, ShiftPair shifts, double psi_value)
{
    if (n < 1) throw DomainError("region index must be >= 1");
    if (!(psi_value >= 0.0)) throw DomainError("region threshold must be >= 0");
    return Region(n, shifts, psi_value, RegionKind::Full, 0, false);
}

Region Region::shrunk(std::uint64_t m, std::uint64_t n_ambient, ShiftPair shifts, double psi_m)
{
    if (m < 1) throw DomainError("region index must be >= 1");
    if (!(psi_m >= 0.0)) throw DomainError("region threshold must be >= 0");
    const double raw = psi_m - shrink_amount(n_ambient);
    return Region(m, shifts, std::max(0.0, raw), RegionKind::Shrunk, n_ambient, raw <= 0.0);
}

double region_area_exact(double psi)
{
    if (!(psi >= 0.0)) throw DomainError("region_area_exact: psi must be >= 0");
    if (psi == 0.0) return 0.0;
    if (psi >= 0.25) return 1.0;
    return 4.0 * psi * std::log(1.0 / psi) - 4.0 * (std::log(4.0) - 1.0) * psi;
}

AreaEstimate region_area_mc(const Region& region, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads)
{
    if (samples == 0) throw DomainError("region_area_mc: samples must be >= 1");
    const std::uint64_t key = stream_key(seed, stream_tag::kAreaSample);
    constexpr std::uint64_t kBlocks = 256;
    std::vector<std::uint64_t> hits(kBlocks, 0);
    parallel_blocks(samples, kBlocks, threads,
                    [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
                        std::uint64_t local = 0;
                        for (std::uint64_t i = begin; i < end; ++i) {
                            const Point p(counter_uniform(key, 2 * i),
                                          counter_uniform(key, 2 * i + 1));
                            local += region.contains(p) ? 1 : 0;
                        }
                        hits[b] = local;
                    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    AreaEstimate est;
    est.samples = samples;
    est.mean = static_cast<double>(total) / static_cast<double>(samples);
    est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(samples));
    return est;
}

double separation_radius(std::uint64_t n)
{
    if (n < 2) throw DomainError("separation_radius requires n >= 2");
    const double nn = static_cast<double>(n);
    const double log_n = std::log(nn);
    return 1.0 / (nn * nn * log_n * log_n);
}

double distance_to_hyperbolic_region(double x, double y, double c)
{
    if (!(x >= 0.0 && y >= 0.0 && c >= 0.0))
        throw DomainError("distance_to_hyperbolic_region: arguments must be >= 0");
    if (x * y <= c) return 0.0;
    if (c == 0.0) return std::min(x, y);

    // The nearest point (t, c/t) has c/y <= t <= x and is a root of
    //   t^4 - x t^3 + c y t - c^2 = 0.
    const double lo = c / y;
    const double hi = x;
    auto g = [&](double t) { return ((t - x) * t * t) * t + c * (y * t - c); };
    auto dg = [&](double t) { return (4.0 * t - 3.0 * x) * t * t + c * y; };
    auto dist = [&](double t) { return std::hypot(t - x, c / t - y); };

    // Both projections onto the hyperbola bound the distance from above.
    double best = std::min(dist(lo), dist(hi));

    Eigen::Matrix<double, 5, 1> coeffs;
    coeffs << -c * c, c * y, 0.0, -x, 1.0;
    Eigen::PolynomialSolver<double, 4> solver(coeffs);
    const double scale = std::max(hi, 1.0);
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
        const auto root = solver.roots()[i];
        if (std::abs(root.imag()) > 1e-6 * scale) continue;
        double t = root.real();
        for (int it = 0; it < 4; ++it) {
            const double d = dg(t);
            if (d == 0.0) break;
            t -= g(t) / d;
        }
        if (!(t > 0.0)) continue;
        t = std::clamp(t, lo, hi);
        best = std::min(best, dist(t));
    }
    return best;
}

BoundaryGap min_boundary_gap(std::uint64_t m, std::uint64_t n, ShiftPair shifts,
                             const PsiSpec& psi, std::uint64_t probe_count)
{
    if (m < 1 || m > n) throw DomainError("min_boundary_gap requires 1 <= m <= n");
    if (probe_count < 1) throw DomainError("min_boundary_gap requires probe_count >= 1");
    const double c = psi(m);
    const double c_inner = c - shrink_amount(n);

    BoundaryGap out;
    out.probes = probe_count;
    out.gap = kInf;
    // A_m is the whole torus (nothing outside) or B_m^(n) is empty.
    if (c >= 0.25 || c_inner <= 0.0) return out;

    // Work in scaled coordinates U = m alpha - gamma, V = m beta - delta around
    // the lattice centre (0, 0). The boundary of A_m inside the first quadrant
    // of the cell is V = c / U for U in [2c, 1/2]; the other quadrants are
    // mirror images and other centres are componentwise farther away, so the
    // distance to B_m^(n) is the distance to {U V <= c_inner} in this quadrant.
    // Probes are log-spaced, which places the vertex sqrt(c) at the midpoint.
    const double u_lo = 2.0 * c;
    const double log_ratio = std::log(0.5 / u_lo);
    double best = kInf;
    double best_u = 0.0;
    for (std::uint64_t k = 0; k < probe_count; ++k) {
        const double theta =
            probe_count == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(probe_count - 1);
        const double u = (k + 1 == probe_count && probe_count > 1) ? 0.5
                                                                   : u_lo * std::exp(theta * log_ratio);
        const double v = c / u;
        const double d = distance_to_hyperbolic_region(u, v, c_inner);
        if (d < best) {
            best = d;
            best_u = u;
        }
    }
    const double mm = static_cast<double>(m);
    out.gap = best / mm;
    out.argmin_offset = best_u;
    out.argmin = Point(wrap01((shifts.gamma + best_u) / mm), wrap01((shifts.delta + c / best_u) / mm));
    return out;
}

} // namespace randlitt
