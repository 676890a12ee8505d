#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace percolab {

using Complex = std::complex<double>;
using SiteId = std::int32_t;

inline constexpr SiteId kNoSite = -1;

// Sorted, duplicate-free site ids.
using SiteSet = std::vector<SiteId>;

inline void normalize_site_set(SiteSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

struct BoxSpec {
    Complex center;
    double halfwidth = 0.0;  // a: box spans 2a x 2a around center, clipped to Im >= 0
};

// Triangular lattice in the closed upper half-plane, mesh eta, truncated to a
// square window of halfwidth L around `anchor`. Sites live at
//   eta * (i + j/2) + i_unit * eta * j * sqrt(3)/2,   j >= 0,
// so row 0 is exactly the real axis. Site ids are row-major (j, then i),
// which fixes every tie-break downstream.
class Region {
public:
    static constexpr double kRowFactor = 0.8660254037844386467637231707529362;  // sqrt(3)/2

    Region(double mesh, double halfwidth, Complex anchor)
        : mesh_(mesh), halfwidth_(halfwidth), anchor_(anchor) {
        if (!(mesh > 0.0)) throw std::invalid_argument("mesh must be positive");
        if (!(halfwidth > 0.0)) throw std::invalid_argument("halfwidth must be positive");
        const double row_h = mesh_ * kRowFactor;
        const double y_lo = std::max(0.0, anchor.imag() - halfwidth);
        const double y_hi = anchor.imag() + halfwidth;
        if (y_hi < 0.0) throw std::invalid_argument("window lies below the half-plane");
        j_lo_ = static_cast<std::int32_t>(std::ceil(y_lo / row_h - kSnap));
        j_lo_ = std::max(j_lo_, 0);
        std::int32_t j_hi = static_cast<std::int32_t>(std::floor(y_hi / row_h + kSnap));
        if (j_hi < j_lo_) throw std::invalid_argument("window contains no lattice row");

        const double x_lo = anchor.real() - halfwidth;
        const double x_hi = anchor.real() + halfwidth;
        std::int32_t next_offset = 0;
        for (std::int32_t j = j_lo_; j <= j_hi; ++j) {
            // x = eta * (i + j/2) in [x_lo, x_hi]
            double base = 0.5 * j;
            std::int32_t i_min = static_cast<std::int32_t>(std::ceil(x_lo / mesh_ - base - kSnap));
            std::int32_t i_max = static_cast<std::int32_t>(std::floor(x_hi / mesh_ - base + kSnap));
            if (i_max < i_min) throw std::invalid_argument("window too narrow for row");
            rows_.push_back(Row{i_min, i_max, next_offset});
            next_offset += i_max - i_min + 1;
        }
        n_sites_ = next_offset;
        if (n_sites_ == 0) throw std::invalid_argument("window contains no site");

        site_i_.resize(n_sites_);
        site_j_.resize(n_sites_);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Row& row = rows_[r];
            std::int32_t j = j_lo_ + static_cast<std::int32_t>(r);
            for (std::int32_t i = row.i_min; i <= row.i_max; ++i) {
                SiteId id = row.offset + (i - row.i_min);
                site_i_[id] = i;
                site_j_[id] = j;
            }
        }

        // Forward edges (three of the six directions) cover every undirected
        // edge exactly once; the cluster pass iterates only these.
        fwd_.assign(static_cast<std::size_t>(n_sites_) * 3, kNoSite);
        for (SiteId s = 0; s < n_sites_; ++s) {
            fwd_[3 * s + 0] = site_at(site_i_[s] + 1, site_j_[s]);
            fwd_[3 * s + 1] = site_at(site_i_[s], site_j_[s] + 1);
            fwd_[3 * s + 2] = site_at(site_i_[s] - 1, site_j_[s] + 1);
        }
    }

    double mesh() const { return mesh_; }
    double halfwidth() const { return halfwidth_; }
    Complex anchor() const { return anchor_; }
    SiteId size() const { return n_sites_; }

    std::int32_t index_i(SiteId s) const { return site_i_[s]; }
    std::int32_t index_j(SiteId s) const { return site_j_[s]; }

    Complex position(SiteId s) const {
        return Complex(mesh_ * (site_i_[s] + 0.5 * site_j_[s]),
                       mesh_ * kRowFactor * site_j_[s]);
    }

    bool boundary_flag(SiteId s) const { return site_j_[s] == 0; }

    // Id of lattice point (i, j), or kNoSite if outside the window.
    SiteId site_at(std::int32_t i, std::int32_t j) const {
        std::int32_t r = j - j_lo_;
        if (r < 0 || r >= static_cast<std::int32_t>(rows_.size())) return kNoSite;
        const Row& row = rows_[r];
        if (i < row.i_min || i > row.i_max) return kNoSite;
        return row.offset + (i - row.i_min);
    }

    const std::int32_t* forward_neighbors(SiteId s) const { return &fwd_[3 * s]; }

    static constexpr int kNumDirections = 6;
    // Counter-clockwise order starting at (+1, 0).
    static std::pair<std::int32_t, std::int32_t> direction(int d) {
        static constexpr std::int32_t di[6] = {1, 0, -1, -1, 0, 1};
        static constexpr std::int32_t dj[6] = {0, 1, 1, 0, -1, -1};
        return {di[d], dj[d]};
    }

    SiteId neighbor(SiteId s, int d) const {
        auto [di, dj] = direction(d);
        return site_at(site_i_[s] + di, site_j_[s] + dj);
    }

    std::vector<SiteId> neighbors(SiteId s) const {
        std::vector<SiteId> out;
        out.reserve(6);
        for (int d = 0; d < kNumDirections; ++d) {
            SiteId t = neighbor(s, d);
            if (t != kNoSite) out.push_back(t);
        }
        return out;
    }

    int degree(SiteId s) const {
        int n = 0;
        for (int d = 0; d < kNumDirections; ++d) n += neighbor(s, d) != kNoSite;
        return n;
    }

    bool point_in_window(Complex p) const {
        return p.imag() >= -kSnap * mesh_ &&
               std::abs(p.real() - anchor_.real()) <= halfwidth_ + kSnap * mesh_ &&
               std::abs(p.imag() - anchor_.imag()) <= halfwidth_ + kSnap * mesh_;
    }

    // Site whose Voronoi hexagon contains p; ties by smallest id. Exact
    // nearest-site search: scans candidate rows outward until the vertical
    // gap alone exceeds the best distance.
    SiteId site_of_point(Complex p) const {
        if (!point_in_window(p))
            throw std::invalid_argument("point outside truncation window");
        const double row_h = mesh_ * kRowFactor;
        const double tie_tol = 1e-12 * mesh_ * mesh_;
        std::int32_t j_center = static_cast<std::int32_t>(std::lround(p.imag() / row_h));
        SiteId best = kNoSite;
        double best_d2 = std::numeric_limits<double>::infinity();
        auto scan_row = [&](std::int32_t j) {
            std::int32_t r = j - j_lo_;
            if (r < 0 || r >= static_cast<std::int32_t>(rows_.size())) return;
            const Row& row = rows_[r];
            std::int32_t ic = static_cast<std::int32_t>(std::lround(p.real() / mesh_ - 0.5 * j));
            ic = std::clamp(ic, row.i_min, row.i_max);
            for (std::int32_t i = std::max(row.i_min, ic - 2); i <= std::min(row.i_max, ic + 2); ++i) {
                SiteId s = row.offset + (i - row.i_min);
                Complex q = position(s);
                double dx = p.real() - q.real(), dy = p.imag() - q.imag();
                double d2 = dx * dx + dy * dy;
                if (d2 < best_d2 - tie_tol || (std::abs(d2 - best_d2) <= tie_tol && s < best)) {
                    best = s;
                    best_d2 = d2;
                }
            }
        };
        for (std::int32_t off = 0;; ++off) {
            bool any = false;
            for (std::int32_t j : {j_center - off, j_center + off}) {
                if (off > 0 && j == j_center) continue;
                double gap = std::abs(p.imag() - row_h * j);
                if (gap * gap <= best_d2 + tie_tol) {
                    scan_row(j);
                    if (j >= j_lo_ && j < j_lo_ + static_cast<std::int32_t>(rows_.size())) any = true;
                }
                if (off == 0) break;
            }
            if (off > 0 && !any) break;
        }
        if (best == kNoSite) throw std::invalid_argument("no site near point");
        return best;
    }

    // Boundary sites with Re(position) in [a, b] (closed; grid-snapped).
    SiteSet boundary_interval_sites(double a, double b) const {
        if (a > b) throw std::invalid_argument("interval with a > b");
        SiteSet out;
        if (j_lo_ != 0) return out;
        const Row& row = rows_[0];
        std::int32_t i_lo = static_cast<std::int32_t>(std::ceil(a / mesh_ - kSnap));
        std::int32_t i_hi = static_cast<std::int32_t>(std::floor(b / mesh_ + kSnap));
        i_lo = std::max(i_lo, row.i_min);
        i_hi = std::min(i_hi, row.i_max);
        for (std::int32_t i = i_lo; i <= i_hi; ++i) out.push_back(row.offset + (i - row.i_min));
        return out;
    }

    // Membership rule for B_r(z): sup-norm strictly below r ("open outer"),
    // so annuli A(z; a, b) = B_b \ B_a carry their inner edge ("closed
    // inner") and box/annulus partitions are exact.
    bool in_box(SiteId s, Complex z, double r) const {
        Complex q = position(s);
        double tol = kSnap * (std::abs(z) + r + 1.0);
        double n = std::max(std::abs(q.real() - z.real()), std::abs(q.imag() - z.imag()));
        return n < r - tol;
    }

    SiteSet box_sites(const BoxSpec& box) const {
        if (!(box.halfwidth > 0.0)) throw std::invalid_argument("box halfwidth must be positive");
        SiteSet out;
        for_box_rows(box.center, box.halfwidth, [&](SiteId s) {
            if (in_box(s, box.center, box.halfwidth)) out.push_back(s);
        });
        return out;
    }

    SiteSet annulus_sites(Complex z, double a, double b) const {
        if (!(0.0 < a && a < b)) throw std::invalid_argument("annulus needs 0 < a < b");
        SiteSet out;
        for_box_rows(z, b, [&](SiteId s) {
            if (in_box(s, z, b) && !in_box(s, z, a)) out.push_back(s);
        });
        return out;
    }

    // Enumerate sites in the bounding rows/columns of a box, ordered by id.
    template <class F>
    void for_box_rows(Complex z, double r, F&& fn) const {
        const double row_h = mesh_ * kRowFactor;
        std::int32_t ja = std::max<std::int32_t>(
            j_lo_, static_cast<std::int32_t>(std::floor((z.imag() - r) / row_h)));
        std::int32_t jb = std::min<std::int32_t>(
            j_lo_ + static_cast<std::int32_t>(rows_.size()) - 1,
            static_cast<std::int32_t>(std::ceil((z.imag() + r) / row_h)));
        for (std::int32_t j = ja; j <= jb; ++j) {
            const Row& row = rows_[j - j_lo_];
            double base = 0.5 * j;
            std::int32_t ia = std::max<std::int32_t>(
                row.i_min, static_cast<std::int32_t>(std::floor((z.real() - r) / mesh_ - base)) - 1);
            std::int32_t ib = std::min<std::int32_t>(
                row.i_max, static_cast<std::int32_t>(std::ceil((z.real() + r) / mesh_ - base)) + 1);
            for (std::int32_t i = ia; i <= ib; ++i) fn(row.offset + (i - row.i_min));
        }
    }

private:
    struct Row {
        std::int32_t i_min;
        std::int32_t i_max;
        std::int32_t offset;
    };

    static constexpr double kSnap = 1e-9;

    double mesh_;
    double halfwidth_;
    Complex anchor_;
    std::int32_t j_lo_ = 0;
    SiteId n_sites_ = 0;
    std::vector<Row> rows_;
    std::vector<std::int32_t> site_i_;
    std::vector<std::int32_t> site_j_;
    std::vector<SiteId> fwd_;
};

inline Region build_region(double mesh, double halfwidth, Complex anchor) {
    return Region(mesh, halfwidth, anchor);
}

}  // namespace percolab
