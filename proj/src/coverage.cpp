#include "randlitt/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <fmt/format.h>

#include "randlitt/parallel.hpp"

namespace randlitt {

namespace {

bool lex_less(const Witness& a, const Witness& b)
{
    if (a.point.x() != b.point.x()) return a.point.x() < b.point.x();
    return a.point.y() < b.point.y();
}

// Structure-of-arrays view of the nonempty regions, for the inner loop.
struct RegionTable {
    std::vector<double> scale, gamma, delta, limit, threshold;
    std::vector<std::uint64_t> index;

    RegionTable(const std::vector<Region>& regions, double slack)
    {
        for (const auto& r : regions) {
            if (r.empty()) continue;
            scale.push_back(static_cast<double>(r.n()));
            gamma.push_back(r.shifts().gamma);
            delta.push_back(r.shifts().delta);
            threshold.push_back(r.threshold());
            limit.push_back(r.threshold() - slack);
            index.push_back(r.n());
        }
    }
    std::size_t size() const { return index.size(); }
};

struct SweepPartial {
    std::uint64_t covered = 0;
    std::uint64_t uncovered = 0;
    std::vector<Witness> witnesses;
    std::vector<std::uint64_t> first_cover;
};

nlohmann::json witness_json(const Witness& w)
{
    return {{"alpha", w.point.x()},
            {"beta", w.point.y()},
            {"nearest_miss", w.nearest_miss},
            {"nearest_m", w.nearest_m}};
}

double wrap01(double x) { return x >= 1.0 ? x - 1.0 : x; }

} // namespace

GridSpec GridSpec::resolution(std::uint64_t q, double offset)
{
    if (q < 2) throw DomainError("grid resolution must be >= 2");
    if (!(offset >= 0.0 && offset < 1.0)) throw DomainError("grid offset must lie in [0, 1)");
    return GridSpec(Mode::Resolution, q, 1.0 / static_cast<double>(q), offset);
}

GridSpec GridSpec::spacing(double h, double offset)
{
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("grid spacing must be > 0");
    if (!(offset >= 0.0 && offset < 1.0)) throw DomainError("grid offset must lie in [0, 1)");
    const double side = std::ceil(1.0 / h);
    if (side > 1e9) throw DomainError("grid spacing too small");
    return GridSpec(Mode::Spacing, static_cast<std::uint64_t>(side), h, offset);
}

nlohmann::json GridSpec::to_json() const
{
    nlohmann::json j;
    j["mode"] = mode_ == Mode::Resolution ? "resolution" : "spacing";
    if (mode_ == Mode::Resolution)
        j["Q"] = side_;
    else
        j["h"] = pitch_;
    j["side"] = side_;
    j["points"] = point_count();
    j["offset"] = offset_;
    return j;
}

std::string to_string(CoverTarget t) { return t == CoverTarget::Full ? "full" : "shrunk"; }
std::string to_string(Verdict v) { return v == Verdict::Certified ? "certified" : "failed"; }

std::vector<Region> build_regions(std::uint64_t n_regions, const ShiftStream& shifts,
                                  const PsiSpec& psi, CoverTarget target, std::uint64_t m_min)
{
    if (m_min < 1) throw DomainError("m_min must be >= 1");
    std::vector<Region> regions;
    if (m_min > n_regions) return regions;
    regions.reserve(n_regions - m_min + 1);
    for (std::uint64_t m = m_min; m <= n_regions; ++m) {
        if (target == CoverTarget::Full)
            regions.push_back(Region::full(m, shifts(m), psi(m)));
        else
            regions.push_back(Region::shrunk(m, n_regions, shifts(m), psi(m)));
    }
    return regions;
}

bool union_contains(const std::vector<Region>& regions, const Point& p, double slack)
{
    return std::any_of(regions.begin(), regions.end(),
                       [&](const Region& r) { return r.contains(p, slack); });
}

CoverageReport coverage_sweep(std::uint64_t n_regions, const ShiftStream& shifts,
                              const PsiSpec& psi, const GridSpec& grid, CoverTarget target,
                              const SweepOptions& options)
{
    if (n_regions < 1) throw DomainError("coverage_sweep requires N >= 1");
    if (target == CoverTarget::Shrunk && n_regions < 2)
        throw DomainError("shrunk coverage requires N >= 2");
    if (options.m_min < 1) throw DomainError("m_min must be >= 1");
    if (!(options.slack >= 0.0)) throw DomainError("slack must be >= 0");

    const std::uint64_t region_count =
        options.m_min > n_regions ? 0 : n_regions - options.m_min + 1;
    const double cost = static_cast<double>(grid.point_count()) * static_cast<double>(region_count);
    if (cost > options.budget)
        throw BudgetExceeded(fmt::format("coverage sweep needs {:.3e} membership tests, budget is "
                                         "{:.3e}",
                                         cost, options.budget),
                             cost, options.budget);

    const auto regions = build_regions(n_regions, shifts, psi, target, options.m_min);
    const RegionTable table(regions, options.slack);
    const std::size_t k = table.size();

    CoverageReport report;
    report.n_regions = n_regions;
    report.m_min = options.m_min;
    report.n_ambient = target == CoverTarget::Shrunk ? n_regions : 0;
    report.grid = grid;
    report.target = target;
    report.seed = shifts.seed();
    report.zero_shifts = shifts.is_zero();
    report.psi = psi.to_string();
    report.slack = options.slack;
    report.first_cover.assign(n_regions + 1, 0);

    std::mutex merge_mutex;
    const std::uint64_t side = grid.side();
    parallel_blocks(side, std::min<std::uint64_t>(side, 4096), options.threads,
                    [&](std::uint64_t, std::uint64_t row_begin, std::uint64_t row_end) {
        SweepPartial part;
        part.first_cover.assign(n_regions + 1, 0);
        for (std::uint64_t i = row_begin; i < row_end; ++i) {
            const double alpha = wrap01(grid.coordinate(i));
            for (std::uint64_t j = 0; j < side; ++j) {
                const double beta = wrap01(grid.coordinate(j));
                std::size_t hit = k;
                for (std::size_t r = 0; r < k; ++r) {
                    const double u = table.scale[r] * alpha - table.gamma[r];
                    const double v = table.scale[r] * beta - table.delta[r];
                    const double prod =
                        std::abs(u - std::nearbyint(u)) * std::abs(v - std::nearbyint(v));
                    if (prod <= table.limit[r]) {
                        hit = r;
                        break;
                    }
                }
                if (hit < k) {
                    ++part.covered;
                    ++part.first_cover[table.index[hit]];
                    continue;
                }
                ++part.uncovered;
                if (part.witnesses.size() >= options.witness_cap) continue;
                Witness w;
                w.point = Point(alpha, beta);
                w.nearest_miss = std::numeric_limits<double>::infinity();
                for (std::size_t r = 0; r < k; ++r) {
                    const double u = table.scale[r] * alpha - table.gamma[r];
                    const double v = table.scale[r] * beta - table.delta[r];
                    const double miss =
                        std::abs(u - std::nearbyint(u)) * std::abs(v - std::nearbyint(v)) -
                        table.threshold[r];
                    if (miss < w.nearest_miss) {
                        w.nearest_miss = miss;
                        w.nearest_m = table.index[r];
                    }
                }
                part.witnesses.push_back(w);
            }
        }
        std::lock_guard lock(merge_mutex);
        report.covered_count += part.covered;
        report.uncovered_count += part.uncovered;
        for (std::size_t m = 0; m < part.first_cover.size(); ++m)
            report.first_cover[m] += part.first_cover[m];
        report.uncovered_witnesses.insert(report.uncovered_witnesses.end(),
                                          part.witnesses.begin(), part.witnesses.end());
    });

    auto& ws = report.uncovered_witnesses;
    std::sort(ws.begin(), ws.end(), lex_less);
    if (ws.size() > options.witness_cap) ws.resize(options.witness_cap);
    return report;
}

nlohmann::json CoverageReport::to_json() const
{
    nlohmann::json j;
    j["N"] = n_regions;
    j["m_min"] = m_min;
    j["target"] = to_string(target);
    j["n_ambient"] = n_ambient;
    j["grid"] = grid.to_json();
    j["seed"] = seed;
    j["zero_shifts"] = zero_shifts;
    j["psi"] = psi;
    j["slack"] = slack;
    j["covered_count"] = covered_count;
    j["uncovered_count"] = uncovered_count;
    j["uncovered_witnesses"] = nlohmann::json::array();
    for (const auto& w : uncovered_witnesses) j["uncovered_witnesses"].push_back(witness_json(w));
    j["first_cover"] = nlohmann::json::array();
    for (std::size_t m = 0; m < first_cover.size(); ++m)
        if (first_cover[m] != 0) j["first_cover"].push_back({m, first_cover[m]});
    return j;
}

double certify_cost(std::uint64_t n_regions, const CertifyOptions& options)
{
    const double h = separation_radius(n_regions) * std::sqrt(2.0) * (1.0 - options.margin);
    const double side = std::ceil(1.0 / h);
    const double regions =
        options.m_min > n_regions ? 0.0 : static_cast<double>(n_regions - options.m_min + 1);
    return side * side * regions;
}

Certificate certify_cover(std::uint64_t n_regions, const ShiftStream& shifts, const PsiSpec& psi,
                          const CertifyOptions& options)
{
    if (n_regions < 2) throw DomainError("certify_cover requires N >= 2");
    if (!(options.margin > 0.0 && options.margin < 1.0))
        throw DomainError("certificate margin must lie in (0, 1)");

    Certificate cert;
    cert.n_regions = n_regions;
    cert.m_min = options.m_min;
    cert.seed = shifts.seed();
    cert.zero_shifts = shifts.is_zero();
    cert.psi = psi.to_string();
    cert.n_ambient = n_regions;
    cert.margin = options.margin;
    cert.offset = options.offset;
    cert.slack = options.slack;
    cert.separation_radius = separation_radius(n_regions);
    cert.spacing = cert.separation_radius * std::sqrt(2.0) * (1.0 - options.margin);
    cert.covering_radius = cert.spacing * std::sqrt(2.0) / 2.0;

    const double cost = certify_cost(n_regions, options);
    if (cost > options.budget)
        throw BudgetExceeded(fmt::format("certificate at N={} needs {:.3e} membership tests, "
                                         "budget is {:.3e}",
                                         n_regions, cost, options.budget),
                             cost, options.budget);

    const auto grid = GridSpec::spacing(cert.spacing, options.offset);
    cert.grid_side = grid.side();

    SweepOptions sweep;
    sweep.budget = options.budget;
    sweep.threads = options.threads;
    sweep.witness_cap = 1;
    sweep.slack = options.slack;
    sweep.m_min = options.m_min;
    const auto report = coverage_sweep(n_regions, shifts, psi, grid, CoverTarget::Shrunk, sweep);
    if (report.uncovered_count == 0) {
        cert.verdict = Verdict::Certified;
    } else {
        cert.verdict = Verdict::Failed;
        cert.witness = report.uncovered_witnesses.front();
    }
    return cert;
}

nlohmann::json Certificate::to_json() const
{
    nlohmann::json j;
    j["verdict"] = to_string(verdict);
    j["N"] = n_regions;
    j["m_min"] = m_min;
    j["seed"] = seed;
    j["zero_shifts"] = zero_shifts;
    j["psi"] = psi;
    j["n_ambient"] = n_ambient;
    j["spacing"] = spacing;
    j["margin"] = margin;
    j["offset"] = offset;
    j["slack"] = slack;
    j["separation_radius"] = separation_radius;
    j["covering_radius"] = covering_radius;
    j["grid_side"] = grid_side;
    j["witness"] = witness ? witness_json(*witness) : nlohmann::json(nullptr);
    return j;
}

std::string Certificate::to_text() const
{
    std::string out;
    out += "COVER CERTIFICATE\n";
    out += fmt::format("  verdict            {}\n", to_string(verdict));
    out += fmt::format("  regions            m = {}..{}\n", m_min, n_regions);
    out += fmt::format("  psi                {}\n", psi);
    out += fmt::format("  shifts             {}\n",
                       zero_shifts ? std::string("zero (debug, non-random)")
                                   : fmt::format("seed {}", seed));
    out += fmt::format("  shrink ambient     {}\n", n_ambient);
    out += fmt::format("  separation radius  {:.17g}\n", separation_radius);
    out += fmt::format("  grid spacing h     {:.17g}\n", spacing);
    out += fmt::format("  covering radius    {:.17g}\n", covering_radius);
    out += fmt::format("  margin             {}\n", margin);
    out += fmt::format("  grid offset        {}\n", offset);
    out += fmt::format("  grid side          {} ({} points)\n", grid_side, grid_side * grid_side);
    out += fmt::format("  membership slack   {:g} (product <= threshold - slack)\n", slack);
    if (verdict == Verdict::Certified) {
        out += fmt::format("  meaning            every point of [0,1)^2 lies in the union of A_m, "
                           "m = {}..{}, modulo float rounding within the slack\n",
                           m_min, n_regions);
    } else if (witness) {
        out += fmt::format("  witness            ({:.17g}, {:.17g}) outside every shrunk region; "
                           "nearest miss {:.6g} at m = {}\n",
                           witness->point.x(), witness->point.y(), witness->nearest_miss,
                           witness->nearest_m);
    }
    return out;
}

std::optional<Certificate> smallest_certified(const ShiftStream& shifts, const PsiSpec& psi,
                                              const CertifyOptions& options, std::uint64_t n_limit)
{
    for (std::uint64_t n = 2; n <= n_limit; ++n) {
        if (certify_cost(n, options) > options.budget) break;
        auto cert = certify_cover(n, shifts, psi, options);
        if (cert.verdict == Verdict::Certified) return cert;
    }
    return std::nullopt;
}

std::uint64_t proof_grid_resolution(std::uint64_t n, double epsilon)
{
    if (n < 2) throw DomainError("proof grid requires n >= 2");
    if (!(epsilon > 0.0)) throw DomainError("proof grid requires epsilon > 0");
    const double exact = std::pow(static_cast<double>(n), 2.0 + epsilon / 2.0);
    if (exact > 1e9) throw DomainError("proof grid resolution too large");
    // glibc pow is correctly rounded, so exact integer powers floor correctly.
    const auto q = static_cast<std::uint64_t>(std::floor(exact));
    return q;
}

CoverageReport proof_grid_experiment(std::uint64_t n, double epsilon, const ShiftStream& shifts,
                                     const PsiSpec& psi, const SweepOptions& options)
{
    const std::uint64_t q = proof_grid_resolution(n, epsilon);
    const double cost = static_cast<double>(q) * static_cast<double>(q) * static_cast<double>(n);
    if (cost > options.budget)
        throw BudgetExceeded(fmt::format("proof grid Q={} needs {:.3e} membership tests, budget "
                                         "is {:.3e}",
                                         q, cost, options.budget),
                             cost, options.budget);
    return coverage_sweep(n, shifts, psi, GridSpec::resolution(q), CoverTarget::Shrunk, options);
}

} // namespace randlitt
