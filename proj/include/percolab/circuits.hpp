#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "lattice.hpp"
#include "percolation.hpp"

namespace percolab {

// Open (semi-)circuit in the square annulus A(z; a, b). Sites are ordered;
// a full circuit closes up (last adjacent to first), a semi-circuit starts
// and ends on the boundary row and, together with the stretch of the real
// axis between its endpoints, disconnects B_a(z) from infinity.
//
// "Surrounds B_a(z)" is decided by the winding of the site polyline around
// the representative point p* = z (or z + i a/2 when z sits on the axis);
// the exhaustive test oracle applies the same rule.
struct Circuit {
    std::vector<SiteId> sites;
    bool is_semi = false;
    Complex z;
    double a = 0.0;
    double b = 0.0;
};

// Precomputed geometry for repeated circuit extraction in one annulus.
// Per box site and direction the neighbor is classified once, so the
// per-sample flood and trace run on integers only.
class AnnulusAnalyzer {
public:
    enum : std::int32_t { kSouth = -2, kBeyondOuter = -3 };

    AnnulusAnalyzer(const Region& region, Complex z, double a, double b)
        : region_(&region), z_(z), a_(a), b_(b) {
        if (!(0.0 < a && a < b)) throw std::invalid_argument("annulus needs 0 < a < b");
        if (!(b - a >= 2.0 * region.mesh() - 1e-12))
            throw std::invalid_argument("annulus too thin: need b - a >= 2 mesh");
        // B_b plus one site of margin must fit the window.
        Complex anc = region.anchor();
        if (std::abs(z.real() - anc.real()) + b + region.mesh() > region.halfwidth() ||
            z.imag() - anc.imag() + b + region.mesh() > region.halfwidth())
            throw std::invalid_argument("annulus does not fit the truncation window");
        if (anc.imag() - region.halfwidth() > 0.0 &&
            z.imag() - b - region.mesh() < anc.imag() - region.halfwidth())
            throw std::invalid_argument("annulus does not fit the truncation window");

        region.for_box_rows(z, b, [&](SiteId s) {
            if (region.in_box(s, z, b)) box_sites_.push_back(s);
        });
        local_.reserve(box_sites_.size());
        for (std::size_t k = 0; k < box_sites_.size(); ++k) local_[box_sites_[k]] = (int)k;

        in_ba_.resize(box_sites_.size());
        nbr_.resize(box_sites_.size() * 6);
        bool any_inner = false;
        for (std::size_t k = 0; k < box_sites_.size(); ++k) {
            SiteId s = box_sites_[k];
            in_ba_[k] = region.in_box(s, z, a);
            any_inner |= in_ba_[k];
            for (int d = 0; d < 6; ++d) {
                auto [di, dj] = Region::direction(d);
                std::int32_t i = region.index_i(s) + di;
                std::int32_t j = region.index_j(s) + dj;
                std::int32_t code;
                if (j < 0) {
                    code = kSouth;
                } else {
                    Complex p(region.mesh() * (i + 0.5 * j),
                              region.mesh() * Region::kRowFactor * j);
                    double tol = 1e-9 * (std::abs(z) + b + 1.0);
                    double norm = std::max(std::abs(p.real() - z.real()),
                                           std::abs(p.imag() - z.imag()));
                    if (norm >= b - tol) {
                        code = kBeyondOuter;
                    } else {
                        SiteId t = region.site_at(i, j);
                        if (t == kNoSite)
                            throw std::logic_error("missing site inside validated annulus");
                        code = local_.at(t);
                    }
                }
                nbr_[6 * k + d] = code;
            }
        }
        if (!any_inner)
            throw std::invalid_argument("degenerate annulus: B_a contains no site");
        p_star_ = z.imag() > 0.5 * a ? z : Complex(z.real(), z.imag() + 0.5 * a);
        meets_axis_ = z.imag() - b < 1e-12;
    }

    const Region& region() const { return *region_; }
    Complex representative_point() const { return p_star_; }
    const std::vector<SiteId>& box_sites() const { return box_sites_; }
    std::size_t annulus_site_count() const {
        std::size_t n = 0;
        for (std::size_t k = 0; k < box_sites_.size(); ++k) n += !in_ba_[k];
        return n;
    }
    bool in_annulus_local(int k) const { return !in_ba_[k]; }
    bool meets_axis() const { return meets_axis_; }

    std::optional<Circuit> outermost(const BitConfig& config) const {
        return extract(config, /*outer_mode=*/true);
    }
    std::optional<Circuit> innermost(const BitConfig& config) const {
        return extract(config, /*outer_mode=*/false);
    }

private:
    // Winding number of the closed polyline through the given local sites
    // (plus, for arcs, the straight closing segment) around p*.
    double winding(const std::vector<int>& path, bool close_directly) const {
        if (path.size() < 2) return 0.0;
        double total = 0.0;
        auto angle = [&](int from, int to) {
            Complex u = region_->position(box_sites_[from]) - p_star_;
            Complex v = region_->position(box_sites_[to]) - p_star_;
            return std::atan2(u.real() * v.imag() - u.imag() * v.real(),
                              u.real() * v.real() + u.imag() * v.imag());
        };
        for (std::size_t k = 0; k + 1 < path.size(); ++k) total += angle(path[k], path[k + 1]);
        if (close_directly || path.front() != path.back())
            total += angle(path.back(), path.front());
        return total / (2.0 * 3.14159265358979323846);
    }

    // Erase zero-winding excursions from a walk; an essential sub-loop (the
    // main circuit) replaces the whole stack. `closed` walks must end on
    // their first site.
    std::vector<int> loop_erase(const std::vector<int>& walk, bool closed) const {
        std::vector<int> stack;
        std::unordered_map<int, int> pos;
        stack.reserve(walk.size());
        for (std::size_t t = 0; t < walk.size(); ++t) {
            int v = walk[t];
            auto it = pos.find(v);
            if (it == pos.end()) {
                pos[v] = (int)stack.size();
                stack.push_back(v);
                continue;
            }
            int k = it->second;
            std::vector<int> loop(stack.begin() + k, stack.end());
            loop.push_back(v);
            if (std::abs(winding(loop, false)) < 0.5) {
                for (std::size_t m = k + 1; m < stack.size(); ++m) pos.erase(stack[m]);
                stack.resize(k + 1);
            } else {
                if (!closed)
                    throw std::logic_error("essential sub-loop on a semi-circuit arc");
                loop.pop_back();
                return loop;
            }
        }
        if (closed) throw std::logic_error("closed walk without essential loop");
        return stack;
    }

    struct WalkOut {
        std::vector<int> sites;
        bool closed = false;
    };

    // Wall-following trace. handed = +1 scans clockwise (wall kept on the
    // left), -1 counter-clockwise. Stops on state repetition (closed
    // contour) or when the wall meets the real axis (semi endpoint).
    WalkOut trace_walk(const std::vector<char>& blocked, int s0, int d0, int handed) const {
        WalkOut out;
        out.sites.push_back(s0);
        std::unordered_map<std::int64_t, int> seen;
        int cur = s0;
        int d_back = d0;  // pretend we arrived from the wall pivot
        const std::size_t cap = box_sites_.size() * 6 + 16;
        for (std::size_t step = 0; step < cap; ++step) {
            int chosen_dir = -1, next = -1;
            for (int k = 1; k <= 6; ++k) {
                int d = handed > 0 ? (d_back + 6 - k) % 6 : (d_back + k) % 6;
                std::int32_t code = nbr_[6 * cur + d];
                if (code == kSouth) return out;  // wall meets the floor: endpoint
                if (code == kBeyondOuter || blocked[code]) continue;
                chosen_dir = d;
                next = code;
                break;
            }
            if (chosen_dir < 0) throw std::logic_error("trace has no free direction");
            int back = (chosen_dir + 3) % 6;
            std::int64_t state = (std::int64_t)next * 6 + back;
            auto it = seen.find(state);
            if (it != seen.end()) {
                out.sites.assign(out.sites.begin() + it->second, out.sites.end());
                out.closed = true;
                return out;
            }
            out.sites.push_back(next);
            seen[state] = (int)out.sites.size() - 1;
            cur = next;
            d_back = back;
        }
        throw std::logic_error("trace exceeded state cap");
    }

    std::optional<Circuit> extract(const BitConfig& config, bool outer_mode) const {
        const std::size_t n = box_sites_.size();
        // Flood of closed annulus sites from the relevant rim.
        std::vector<char> flood(n, 0);
        std::vector<int> queue;
        auto closed_site = [&](std::size_t k) { return !config.open(box_sites_[k]); };
        for (std::size_t k = 0; k < n; ++k) {
            if (in_ba_[k] || !closed_site(k)) continue;
            bool seedit = false;
            for (int d = 0; d < 6 && !seedit; ++d) {
                std::int32_t code = nbr_[6 * k + d];
                if (outer_mode) seedit = code == kBeyondOuter;
                else seedit = code >= 0 && in_ba_[code];
            }
            if (seedit) {
                flood[k] = 1;
                queue.push_back((int)k);
            }
        }
        while (!queue.empty()) {
            int k = queue.back();
            queue.pop_back();
            for (int d = 0; d < 6; ++d) {
                std::int32_t code = nbr_[6 * k + d];
                if (code < 0 || flood[code] || in_ba_[code] || !closed_site(code)) continue;
                flood[code] = 1;
                queue.push_back(code);
            }
        }
        // Crossing check: the flood reaching the opposite rim kills both the
        // outermost and the innermost circuit.
        for (std::size_t k = 0; k < n; ++k) {
            if (!flood[k]) continue;
            for (int d = 0; d < 6; ++d) {
                std::int32_t code = nbr_[6 * k + d];
                if (outer_mode ? (code >= 0 && in_ba_[code]) : code == kBeyondOuter)
                    return std::nullopt;
            }
        }

        // blocked = wall for the trace walk.
        std::vector<char> blocked(n, 0);
        for (std::size_t k = 0; k < n; ++k)
            blocked[k] = flood[k] || (!outer_mode && in_ba_[k]);
        auto wall_adjacent = [&](int k) -> int {
            for (int d = 0; d < 6; ++d) {
                std::int32_t code = nbr_[6 * k + d];
                if (outer_mode) {
                    if (code == kBeyondOuter || (code >= 0 && blocked[code])) return d;
                } else {
                    if (code >= 0 && blocked[code]) return d;
                }
            }
            return -1;
        };

        // Reachable free component anchored on the relevant rim.
        std::vector<char> reach(n, 0);
        queue.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if (blocked[k]) continue;
            bool root = false;
            if (outer_mode) {
                root = in_ba_[k];
            } else {
                for (int d = 0; d < 6 && !root; ++d)
                    root = nbr_[6 * k + d] == kBeyondOuter;
            }
            if (root) {
                reach[k] = 1;
                queue.push_back((int)k);
            }
        }
        while (!queue.empty()) {
            int k = queue.back();
            queue.pop_back();
            for (int d = 0; d < 6; ++d) {
                std::int32_t code = nbr_[6 * k + d];
                if (code < 0 || reach[code] || blocked[code]) continue;
                reach[code] = 1;
                queue.push_back(code);
            }
        }

        int s0 = -1, d0 = -1;
        for (std::size_t k = 0; k < n; ++k) {
            if (!reach[k] || blocked[k]) continue;
            int d = wall_adjacent((int)k);
            if (d >= 0) {
                s0 = (int)k;
                d0 = d;
                break;
            }
        }
        if (s0 < 0) throw std::logic_error("no trace start despite passing crossing check");

        WalkOut arm_a = trace_walk(blocked, s0, d0, +1);
        std::vector<int> path;
        bool semi = false;
        if (arm_a.closed) {
            std::vector<int> walk = arm_a.sites;
            walk.push_back(walk.front());
            path = loop_erase(walk, true);
        } else {
            semi = true;
            WalkOut arm_b = trace_walk(blocked, s0, d0, -1);
            std::vector<int> combined(arm_b.sites.rbegin(), arm_b.sites.rend());
            combined.insert(combined.end(), arm_a.sites.begin() + 1, arm_a.sites.end());
            path = loop_erase(combined, false);
        }

        validate(config, path, semi);
        Circuit out;
        out.is_semi = semi;
        out.z = z_;
        out.a = a_;
        out.b = b_;
        out.sites.reserve(path.size());
        for (int k : path) out.sites.push_back(box_sites_[k]);
        return out;
    }

    void validate(const BitConfig& config, const std::vector<int>& path, bool semi) const {
        if (path.size() < (semi ? 1u : 3u)) throw std::logic_error("circuit too short");
        std::vector<char> used(box_sites_.size(), 0);
        for (std::size_t k = 0; k < path.size(); ++k) {
            int v = path[k];
            if (used[v]) throw std::logic_error("circuit repeats a site");
            used[v] = 1;
            if (in_ba_[v]) throw std::logic_error("circuit enters the inner box");
            if (!config.open(box_sites_[v])) throw std::logic_error("circuit uses a closed site");
            if (k + 1 < path.size() && !adjacent(path[k], path[k + 1]))
                throw std::logic_error("circuit sites not consecutive");
        }
        if (semi) {
            if (region_->index_j(box_sites_[path.front()]) != 0 ||
                region_->index_j(box_sites_[path.back()]) != 0)
                throw std::logic_error("semi-circuit endpoint off the boundary row");
        } else if (!adjacent(path.back(), path.front())) {
            throw std::logic_error("full circuit does not close");
        }
        double w = winding(path, semi);
        if (std::abs(std::abs(w) - 1.0) > 0.25)
            throw std::logic_error("extracted circuit does not surround the inner box");
    }

    bool adjacent(int ka, int kb) const {
        for (int d = 0; d < 6; ++d)
            if (nbr_[6 * ka + d] == kb) return true;
        return false;
    }

    const Region* region_;
    Complex z_;
    double a_, b_;
    Complex p_star_;
    bool meets_axis_ = false;
    std::vector<SiteId> box_sites_;
    std::unordered_map<SiteId, int> local_;
    std::vector<char> in_ba_;
    std::vector<std::int32_t> nbr_;
};

inline std::optional<Circuit> outermost_open_circuit(const BitConfig& config, Complex z,
                                                     double a, double b) {
    return AnnulusAnalyzer(*config.region, z, a, b).outermost(config);
}

inline std::optional<Circuit> innermost_open_circuit(const BitConfig& config, Complex z,
                                                     double a, double b) {
    return AnnulusAnalyzer(*config.region, z, a, b).innermost(config);
}

}  // namespace percolab
