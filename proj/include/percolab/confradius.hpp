#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lattice.hpp"
#include "percolation.hpp"
#include "rng.hpp"

namespace percolab {

// Conformal radius estimate in continuum units. The bracket comes from the
// Koebe sandwich dist <= rho <= 4 dist; the optional point estimate from the
// calibrated random-walk return count, clipped into the bracket.
struct RadiusEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> point;
    bool from_green = false;
};

inline RadiusEstimate koebe_bracket(double dist) {
    if (dist < 0.0) throw std::invalid_argument("koebe_bracket needs dist >= 0");
    return RadiusEstimate{dist, 4.0 * dist, std::nullopt, false};
}

// Monotone table mapping expected return count g of the killed walk to the
// radius-to-mesh ratio r/eta. Inversion interpolates ln(r/eta) linearly in
// g, matching the asymptotic g = const + (2/pi) ln(r/eta) law.
struct GreenCalibration {
    std::vector<double> g;
    std::vector<double> r_over_mesh;

    bool valid() const {
        if (g.size() != r_over_mesh.size() || g.size() < 2) return false;
        for (std::size_t i = 1; i < g.size(); ++i)
            if (!(g[i] > g[i - 1]) || !(r_over_mesh[i] > r_over_mesh[i - 1])) return false;
        return true;
    }

    bool in_range(double g_hat) const { return g_hat >= g.front() && g_hat <= g.back(); }

    double invert(double g_hat) const {
        if (!in_range(g_hat)) throw std::invalid_argument("g outside calibration range");
        auto it = std::upper_bound(g.begin(), g.end(), g_hat);
        std::size_t hi = std::min<std::size_t>(g.size() - 1,
                                               static_cast<std::size_t>(it - g.begin()));
        std::size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) return r_over_mesh[lo];
        double t = (g_hat - g[lo]) / (g[hi] - g[lo]);
        return std::exp((1.0 - t) * std::log(r_over_mesh[lo]) + t * std::log(r_over_mesh[hi]));
    }
};

namespace detail {

// Expected returns to the origin of the simple random walk on the unit-mesh
// triangular lattice killed outside the disk of radius R (lattice units).
// Walks in integer axial coordinates; |a e1 + b e2|^2 = a^2 + ab + b^2.
inline double measure_disk_returns(double radius, std::uint64_t walks, const Seed128& seed,
                                   std::uint64_t node_tag) {
    const double r2 = radius * radius;
    static constexpr std::int32_t di[6] = {1, 0, -1, -1, 0, 1};
    static constexpr std::int32_t dj[6] = {0, 1, 1, 0, -1, -1};
    std::uint64_t returns = 0;
    for (std::uint64_t wlk = 0; wlk < walks; ++wlk) {
        DirectionStream dirs(seed, RngStream::kCalibration, (node_tag << 40) | wlk);
        std::int64_t a = 0, b = 0;
        for (;;) {
            int d = dirs.next();
            a += di[d];
            b += dj[d];
            double q = static_cast<double>(a * a + a * b + b * b);
            if (q >= r2) break;
            if (a == 0 && b == 0) ++returns;
        }
    }
    return static_cast<double>(returns) / static_cast<double>(walks);
}

inline void isotonic_increasing(std::vector<double>& v) {
    // pool-adjacent-violators, then nudge exact ties apart
    std::vector<double> val(v);
    std::vector<int> cnt(v.size(), 1);
    std::size_t m = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        val[m] = v[i];
        cnt[m] = 1;
        ++m;
        while (m > 1 && val[m - 2] >= val[m - 1]) {
            double merged = (val[m - 2] * cnt[m - 2] + val[m - 1] * cnt[m - 1]) /
                            (cnt[m - 2] + cnt[m - 1]);
            cnt[m - 2] += cnt[m - 1];
            val[m - 2] = merged;
            --m;
        }
    }
    std::size_t k = 0;
    for (std::size_t blk = 0; blk < m; ++blk)
        for (int c = 0; c < cnt[blk]; ++c) v[k++] = val[blk];
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) v[i] = v[i - 1] + 1e-9;
}

}  // namespace detail

// Measured calibration nodes: dyadically spaced radii offset by sqrt(2), so
// that the powers of two themselves stay available as held-out test disks.
inline std::vector<double> calibration_nodes(double max_r) {
    std::vector<double> nodes = {2.0};
    for (double r = 2.0 * std::sqrt(2.0); r <= max_r * (1.0 + 1e-12); r *= 2.0)
        nodes.push_back(r);
    return nodes;
}

// Builds the g -> r/eta table. walk_budget = walks per node. Nodes up to
// max_measured_r are measured directly; the table is extended to r/eta =
// 4096 by the fitted log law (slope from the measured tail), so queries over
// the whole [2, 2^12] range interpolate. Isotonic smoothing keeps the table
// strictly increasing.
inline GreenCalibration calibrate_green(std::uint64_t walk_budget,
                                        double max_measured_r = 181.02,
                                        Seed128 seed = Seed128{0x9b97f4a7c15ull, 0}) {
    if (walk_budget < 100) throw std::invalid_argument("calibration walk budget too small");
    GreenCalibration cal;
    cal.r_over_mesh = calibration_nodes(max_measured_r);
    cal.g.resize(cal.r_over_mesh.size());
    for (std::size_t i = 0; i < cal.r_over_mesh.size(); ++i)
        cal.g[i] = detail::measure_disk_returns(cal.r_over_mesh[i], walk_budget, seed,
                                                static_cast<std::uint64_t>(i));
    detail::isotonic_increasing(cal.g);

    // weighted fit of g ~ alpha + beta ln r on the tail (log-law regime)
    std::size_t tail_lo = 0;
    while (tail_lo + 3 < cal.r_over_mesh.size() && cal.r_over_mesh[tail_lo] < 8.0) ++tail_lo;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, nfit = 0;
    for (std::size_t i = tail_lo; i < cal.r_over_mesh.size(); ++i) {
        double x = std::log(cal.r_over_mesh[i]);
        sx += x;
        sy += cal.g[i];
        sxx += x * x;
        sxy += x * cal.g[i];
        nfit += 1;
    }
    double beta = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
    double alpha = (sy - beta * sx) / nfit;

    for (double r = cal.r_over_mesh.back() * 2.0; r < 4096.0; r *= 2.0) {
        cal.r_over_mesh.push_back(r);
        cal.g.push_back(alpha + beta * std::log(r));
    }
    cal.r_over_mesh.push_back(4096.0);
    cal.g.push_back(alpha + beta * std::log(4096.0));
    detail::isotonic_increasing(cal.g);
    if (!cal.valid()) throw std::runtime_error("calibration table failed to become monotone");
    return cal;
}

// Expected-return measurement on an actual configuration: walk from w's
// site, killed on the blocking set, on the boundary row (the domain lives in
// the open half-plane) and at the window edge. Returns nullopt if any walk
// hits the step cap (domain effectively unbounded for this budget).
inline std::optional<double> measure_config_returns(const Region& region, Complex w,
                                                    const std::vector<bool>& blocked,
                                                    std::uint64_t walks, const Seed128& seed) {
    SiteId start = region.site_of_point(w);
    if (blocked[start] || region.boundary_flag(start)) return 0.0;
    constexpr std::uint64_t kStepCap = 20'000'000;
    std::uint64_t returns = 0;
    for (std::uint64_t wlk = 0; wlk < walks; ++wlk) {
        DirectionStream dirs(seed, RngStream::kWalk, wlk);
        SiteId cur = start;
        std::uint64_t steps = 0;
        for (;;) {
            if (++steps > kStepCap) return std::nullopt;
            SiteId nxt = region.neighbor(cur, dirs.next());
            if (nxt == kNoSite || blocked[nxt] || region.boundary_flag(nxt)) break;
            cur = nxt;
            if (cur == start) ++returns;
        }
    }
    return static_cast<double>(returns) / static_cast<double>(walks);
}

// rho(w, blocking) estimate: Koebe bracket from the true lattice distance,
// plus the calibrated-walk point estimate clipped into the bracket. Falls
// back to the bare bracket when the measured g leaves the table range
// (component too small or too large for the budget).
inline RadiusEstimate green_radius(const BitConfig& config, const ClusterLabels& labels,
                                   Complex w, const SiteSet& blocking,
                                   std::uint64_t walk_budget, const GreenCalibration& cal,
                                   Seed128 seed = Seed128{0x6265726e6f756c6cull, 1}) {
    (void)labels;
    if (walk_budget < 10'000) throw std::invalid_argument("green_radius walk budget < 1e4");
    if (!cal.valid()) throw std::invalid_argument("invalid calibration table");
    const Region& region = *config.region;
    if (blocking.empty()) throw std::invalid_argument("green_radius: empty blocking set");

    // w inside the blocking set (its hexagon's center blocked) means rho = 0.
    SiteId wsite = region.site_of_point(w);
    if (std::binary_search(blocking.begin(), blocking.end(), wsite)) return koebe_bracket(0.0);

    double dist = std::numeric_limits<double>::infinity();
    for (SiteId s : blocking) dist = std::min(dist, std::abs(region.position(s) - w));
    RadiusEstimate est = koebe_bracket(dist);
    if (dist == 0.0) return est;

    std::vector<bool> blocked(region.size(), false);
    for (SiteId s : blocking) blocked[s] = true;

    auto g_hat = measure_config_returns(region, w, blocked, walk_budget, seed);
    if (!g_hat || !cal.in_range(*g_hat)) return est;
    double point = region.mesh() * cal.invert(*g_hat);
    est.point = std::clamp(point, est.lower, est.upper);
    est.from_green = true;
    return est;
}

}  // namespace percolab
