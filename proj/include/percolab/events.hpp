#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "confradius.hpp"
#include "lattice.hpp"
#include "percolation.hpp"

namespace percolab {

// The event family. Continuum points take part through the site whose
// hexagon contains them (site_of_point), and a point is wired to a cluster
// only if that site is open. Interval anchors resolve through
// boundary_interval_sites; C(A) is the union of clusters over open anchor
// sites.
enum class EventKind {
    TwoPointBB,             // u1 <-> u2
    TwoPointBI,             // u1 <-> w
    TwoPointBI2,            // u2 <-> w
    ThreePoint,             // u1 <-> u2 <-> w in one cluster
    E_II,                   // C([u1,u1+s1]) meets [u2-s2, u2+s2]
    E_IR,                   // rho(w, C([u1,u1+s1])) < s3
    E_IR2,                  // rho(w, C([u2-s2,u2+s2])) < s3
    E_combined,             // E_II and E_IR
    E_pt_II,                // [u1,u1+s1] meets C(u2)
    E_pt_R1,                // rho(w, C(u1)) < s3
    E_pt_R2,                // rho(w, C(u2)) < s3
    E_pt_combined_partial,  // E_pt_II and E_IR
    E_pt_combined_full,     // {u1 <-> u2} and rho(w, C(u1)) < s3
    E_interval_two_targets  // {u2, w} subset of C([u1,u1+s])
};

enum class RadiusMethod { BracketLower, BracketUpper, Green };

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::TwoPointBB: return "TwoPointBB";
        case EventKind::TwoPointBI: return "TwoPointBI";
        case EventKind::TwoPointBI2: return "TwoPointBI2";
        case EventKind::ThreePoint: return "ThreePoint";
        case EventKind::E_II: return "E_II";
        case EventKind::E_IR: return "E_IR";
        case EventKind::E_IR2: return "E_IR2";
        case EventKind::E_combined: return "E_combined";
        case EventKind::E_pt_II: return "E_pt_II";
        case EventKind::E_pt_R1: return "E_pt_R1";
        case EventKind::E_pt_R2: return "E_pt_R2";
        case EventKind::E_pt_combined_partial: return "E_pt_combined_partial";
        case EventKind::E_pt_combined_full: return "E_pt_combined_full";
        case EventKind::E_interval_two_targets: return "E_interval_two_targets";
    }
    return "?";
}

inline EventKind parse_event_kind(const std::string& name) {
    static const std::pair<const char*, EventKind> table[] = {
        {"TwoPointBB", EventKind::TwoPointBB},
        {"TwoPointBI", EventKind::TwoPointBI},
        {"TwoPointBI2", EventKind::TwoPointBI2},
        {"ThreePoint", EventKind::ThreePoint},
        {"E_II", EventKind::E_II},
        {"E_IR", EventKind::E_IR},
        {"E_IR2", EventKind::E_IR2},
        {"E_combined", EventKind::E_combined},
        {"E_pt_II", EventKind::E_pt_II},
        {"E_pt_R1", EventKind::E_pt_R1},
        {"E_pt_R2", EventKind::E_pt_R2},
        {"E_pt_combined_partial", EventKind::E_pt_combined_partial},
        {"E_pt_combined_full", EventKind::E_pt_combined_full},
        {"E_interval_two_targets", EventKind::E_interval_two_targets},
    };
    for (auto& [n, k] : table)
        if (name == n) return k;
    throw std::invalid_argument("unknown event kind '" + name + "'");
}

inline const char* radius_method_name(RadiusMethod m) {
    switch (m) {
        case RadiusMethod::BracketLower: return "bracket-lower";
        case RadiusMethod::BracketUpper: return "bracket-upper";
        case RadiusMethod::Green: return "green";
    }
    return "?";
}

inline RadiusMethod parse_radius_method(const std::string& name) {
    if (name == "bracket-lower") return RadiusMethod::BracketLower;
    if (name == "bracket-upper") return RadiusMethod::BracketUpper;
    if (name == "green") return RadiusMethod::Green;
    throw std::invalid_argument("unknown radius method '" + name + "'");
}

struct MarkedPoints {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    double u1 = kUnset;
    double u2 = kUnset;
    Complex w{kUnset, kUnset};
    double s = kUnset;
    double s1 = kUnset;
    double s2 = kUnset;
    double s3 = kUnset;
};

struct EventSpec {
    EventKind kind;
    MarkedPoints marks;
    RadiusMethod radius_method = RadiusMethod::BracketLower;
};

// Euclidean distance from w to the nearest site of C(anchor); +inf when no
// open anchor site exists. Full scan; the sampling loop uses the windowed
// channel version instead.
inline double distance_to_cluster(const ClusterLabels& labels, Complex w, const SiteSet& anchor) {
    if (anchor.empty()) throw std::invalid_argument("distance_to_cluster: empty anchor");
    const Region& region = *labels.region;
    std::vector<std::int32_t> roots;
    for (SiteId a : anchor)
        if (labels.open(a)) roots.push_back(labels[a]);
    normalize_site_set(roots);
    if (roots.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (SiteId s = 0; s < region.size(); ++s) {
        std::int32_t l = labels[s];
        if (l == kNullLabel || !std::binary_search(roots.begin(), roots.end(), l)) continue;
        best = std::min(best, std::abs(region.position(s) - w));
    }
    return best;
}

namespace detail {

struct RequiredField {
    bool u1, u2, w, s, s1, s2, s3;
};

inline RequiredField required_fields(EventKind k) {
    switch (k) {
        case EventKind::TwoPointBB: return {true, true, false, false, false, false, false};
        case EventKind::TwoPointBI: return {true, false, true, false, false, false, false};
        case EventKind::TwoPointBI2: return {false, true, true, false, false, false, false};
        case EventKind::ThreePoint: return {true, true, true, false, false, false, false};
        case EventKind::E_II: return {true, true, false, false, true, true, false};
        case EventKind::E_IR: return {true, false, true, false, true, false, true};
        case EventKind::E_IR2: return {false, true, true, false, false, true, true};
        case EventKind::E_combined: return {true, true, true, false, true, true, true};
        case EventKind::E_pt_II: return {true, true, false, false, true, false, false};
        case EventKind::E_pt_R1: return {true, false, true, false, false, false, true};
        case EventKind::E_pt_R2: return {false, true, true, false, false, false, true};
        case EventKind::E_pt_combined_partial: return {true, true, true, false, true, false, true};
        case EventKind::E_pt_combined_full: return {true, true, true, false, false, false, true};
        case EventKind::E_interval_two_targets: return {true, true, true, true, false, false, false};
    }
    throw std::logic_error("bad kind");
}

inline void check_marks(const EventSpec& spec) {
    auto need = required_fields(spec.kind);
    const MarkedPoints& m = spec.marks;
    auto bad = [&](const char* f) {
        throw std::invalid_argument(std::string("event ") + event_kind_name(spec.kind) +
                                    " is missing mark '" + f + "'");
    };
    if (need.u1 && std::isnan(m.u1)) bad("u1");
    if (need.u2 && std::isnan(m.u2)) bad("u2");
    if (need.w && (std::isnan(m.w.real()) || std::isnan(m.w.imag()))) bad("w");
    if (need.w && !(m.w.imag() > 0.0))
        throw std::invalid_argument("mark w must lie in the open half-plane");
    if (need.s && !(m.s > 0.0)) bad("s");
    if (need.s1 && !(m.s1 > 0.0)) bad("s1");
    if (need.s2 && !(m.s2 > 0.0)) bad("s2");
    if (need.s3 && !(m.s3 > 0.0)) bad("s3");
}

}  // namespace detail

// Events of one plan compiled against one region: marks resolved to sites,
// interval anchors to site lists, radius events to windowed distance
// channels shared between events. At most 64 events per plan.
class CompiledEvents {
public:
    struct Channel {
        int anchor = -1;
        Complex w;
        double d_max = 0.0;
        SiteSet scan_sites;
    };

    struct Item {
        EventSpec spec;
        SiteId site_u1 = kNoSite;
        SiteId site_u2 = kNoSite;
        SiteId site_w = kNoSite;
        int anchor1 = -1;  // interval [u1,u1+s1], point {u1}, or {u1,u1+s}
        int anchor2 = -1;  // interval [u2-s2,u2+s2]
        int channel = -1;
        double threshold = 0.0;
    };

    struct Workspace {
        std::vector<std::vector<std::int32_t>> anchor_labels;
        std::vector<double> channel_dist;
    };

    CompiledEvents(const Region& region, const std::vector<EventSpec>& specs) : region_(&region) {
        if (specs.size() > 64) throw std::invalid_argument("plan exceeds 64 events");
        for (const EventSpec& spec : specs) compile_one(spec);
        for (Channel& ch : channels_) {
            ch.d_max += 2.0 * region.mesh();
            region.for_box_rows(ch.w, ch.d_max + region.mesh(), [&](SiteId s) {
                Complex q = region.position(s);
                if (std::max(std::abs(q.real() - ch.w.real()), std::abs(q.imag() - ch.w.imag())) <=
                    ch.d_max)
                    ch.scan_sites.push_back(s);
            });
        }
    }

    const Region& region() const { return *region_; }
    int count() const { return static_cast<int>(items_.size()); }
    const Item& item(int k) const { return items_[k]; }

    void init_workspace(Workspace& ws) const {
        ws.anchor_labels.resize(anchors_.size());
        ws.channel_dist.resize(channels_.size());
    }

    // Evaluates every event on one labeled sample; bit k of the result is
    // event k.
    std::uint64_t evaluate_all(const ClusterLabels& labels, Workspace& ws) const {
        for (std::size_t a = 0; a < anchors_.size(); ++a) {
            auto& set = ws.anchor_labels[a];
            set.clear();
            for (SiteId s : anchors_[a])
                if (labels.open(s)) set.push_back(labels[s]);
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
        }
        for (std::size_t c = 0; c < channels_.size(); ++c) {
            const Channel& ch = channels_[c];
            const auto& roots = ws.anchor_labels[ch.anchor];
            double best = std::numeric_limits<double>::infinity();
            if (!roots.empty()) {
                for (SiteId s : ch.scan_sites) {
                    std::int32_t l = labels[s];
                    if (l == kNullLabel || !std::binary_search(roots.begin(), roots.end(), l))
                        continue;
                    Complex d = region_->position(s) - ch.w;
                    best = std::min(best, d.real() * d.real() + d.imag() * d.imag());
                }
            }
            ws.channel_dist[c] = std::sqrt(best);
        }
        std::uint64_t mask = 0;
        for (std::size_t k = 0; k < items_.size(); ++k)
            if (evaluate_item(items_[k], labels, ws)) mask |= std::uint64_t(1) << k;
        return mask;
    }

    bool evaluate_one(int k, const ClusterLabels& labels, Workspace& ws) const {
        return (evaluate_all(labels, ws) >> k) & 1;
    }

private:
    int intern_anchor(SiteSet sites) {
        for (std::size_t i = 0; i < anchors_.size(); ++i)
            if (anchors_[i] == sites) return static_cast<int>(i);
        anchors_.push_back(std::move(sites));
        return static_cast<int>(anchors_.size()) - 1;
    }

    int intern_channel(int anchor, Complex w, double d_needed) {
        for (std::size_t i = 0; i < channels_.size(); ++i) {
            if (channels_[i].anchor == anchor && channels_[i].w == w) {
                channels_[i].d_max = std::max(channels_[i].d_max, d_needed);
                return static_cast<int>(i);
            }
        }
        channels_.push_back(Channel{anchor, w, d_needed, {}});
        return static_cast<int>(channels_.size()) - 1;
    }

    SiteSet interval_anchor(double a, double b) {
        SiteSet s = region_->boundary_interval_sites(a, b);
        if (s.empty())
            throw std::invalid_argument("interval anchor [" + std::to_string(a) + ", " +
                                        std::to_string(b) + "] contains no boundary site");
        return s;
    }

    void require_in_window(Complex p, double slack, const char* what) {
        const Region& r = *region_;
        if (std::abs(p.real() - r.anchor().real()) + slack > r.halfwidth() ||
            p.imag() - r.anchor().imag() + slack > r.halfwidth() || p.imag() < -1e-9)
            throw std::invalid_argument(std::string("margin violation: ") + what +
                                        " does not fit the truncation window");
    }

    void compile_one(const EventSpec& spec) {
        detail::check_marks(spec);
        if (spec.radius_method == RadiusMethod::Green &&
            (spec.kind == EventKind::E_IR || spec.kind == EventKind::E_IR2 ||
             spec.kind == EventKind::E_pt_R1 || spec.kind == EventKind::E_pt_R2 ||
             spec.kind == EventKind::E_combined || spec.kind == EventKind::E_pt_combined_partial ||
             spec.kind == EventKind::E_pt_combined_full))
            throw std::invalid_argument(
                "green radius estimates are for refinement runs, not sampling plans");

        const MarkedPoints& m = spec.marks;
        auto need = detail::required_fields(spec.kind);
        Item it;
        it.spec = spec;
        if (need.u1) {
            require_in_window(Complex(m.u1, 0.0), 2.0 * region_->mesh(), "u1");
            it.site_u1 = region_->site_of_point(Complex(m.u1, 0.0));
        }
        if (need.u2) {
            require_in_window(Complex(m.u2, 0.0), 2.0 * region_->mesh(), "u2");
            it.site_u2 = region_->site_of_point(Complex(m.u2, 0.0));
        }
        if (need.w) {
            double slack = 2.0 * region_->mesh() + (need.s3 ? m.s3 : 0.0);
            require_in_window(m.w, slack, "w");
            it.site_w = region_->site_of_point(m.w);
        }
        if (need.s1) require_in_window(Complex(m.u1 + m.s1, 0.0), 2.0 * region_->mesh(), "u1+s1");
        if (need.s) require_in_window(Complex(m.u1 + m.s, 0.0), 2.0 * region_->mesh(), "u1+s");
        if (need.s2) {
            require_in_window(Complex(m.u2 - m.s2, 0.0), 2.0 * region_->mesh(), "u2-s2");
            require_in_window(Complex(m.u2 + m.s2, 0.0), 2.0 * region_->mesh(), "u2+s2");
        }

        switch (spec.kind) {
            case EventKind::TwoPointBB:
            case EventKind::TwoPointBI:
            case EventKind::TwoPointBI2:
            case EventKind::ThreePoint:
                break;
            case EventKind::E_II:
                it.anchor1 = intern_anchor(interval_anchor(m.u1, m.u1 + m.s1));
                it.anchor2 = intern_anchor(interval_anchor(m.u2 - m.s2, m.u2 + m.s2));
                break;
            case EventKind::E_IR:
                it.anchor1 = intern_anchor(interval_anchor(m.u1, m.u1 + m.s1));
                break;
            case EventKind::E_IR2:
                it.anchor1 = intern_anchor(interval_anchor(m.u2 - m.s2, m.u2 + m.s2));
                break;
            case EventKind::E_combined:
                it.anchor1 = intern_anchor(interval_anchor(m.u1, m.u1 + m.s1));
                it.anchor2 = intern_anchor(interval_anchor(m.u2 - m.s2, m.u2 + m.s2));
                break;
            case EventKind::E_pt_II:
                it.anchor1 = intern_anchor(interval_anchor(m.u1, m.u1 + m.s1));
                break;
            case EventKind::E_pt_R1:
                it.anchor1 = intern_anchor(SiteSet{it.site_u1});
                break;
            case EventKind::E_pt_R2:
                it.anchor1 = intern_anchor(SiteSet{it.site_u2});
                break;
            case EventKind::E_pt_combined_partial:
                it.anchor1 = intern_anchor(interval_anchor(m.u1, m.u1 + m.s1));
                break;
            case EventKind::E_pt_combined_full:
                it.anchor1 = intern_anchor(SiteSet{it.site_u1});
                break;
            case EventKind::E_interval_two_targets:
                it.anchor1 = intern_anchor(interval_anchor(m.u1, m.u1 + m.s));
                break;
        }

        if (need.s3) {
            it.threshold =
                spec.radius_method == RadiusMethod::BracketLower ? m.s3 / 4.0 : m.s3;
            it.channel = intern_channel(it.anchor1, m.w, m.s3);
        }
        items_.push_back(std::move(it));
    }

    bool evaluate_item(const Item& it, const ClusterLabels& labels, Workspace& ws) const {
        auto in_anchor_cluster = [&](int anchor, SiteId s) {
            const auto& set = ws.anchor_labels[anchor];
            std::int32_t l = labels[s];
            return l != kNullLabel && std::binary_search(set.begin(), set.end(), l);
        };
        auto anchors_meet = [&](int a, int b) {
            const auto& sa = ws.anchor_labels[a];
            const auto& sb = ws.anchor_labels[b];
            // both sorted; small
            std::size_t i = 0, j = 0;
            while (i < sa.size() && j < sb.size()) {
                if (sa[i] < sb[j]) ++i;
                else if (sb[j] < sa[i]) ++j;
                else return true;
            }
            return false;
        };
        auto radius_hit = [&](const Item& item) {
            return ws.channel_dist[item.channel] < item.threshold;
        };

        switch (it.spec.kind) {
            case EventKind::TwoPointBB:
                return labels.same_cluster(it.site_u1, it.site_u2);
            case EventKind::TwoPointBI:
                return labels.same_cluster(it.site_u1, it.site_w);
            case EventKind::TwoPointBI2:
                return labels.same_cluster(it.site_u2, it.site_w);
            case EventKind::ThreePoint:
                return labels.same_cluster(it.site_u1, it.site_u2) &&
                       labels.same_cluster(it.site_u1, it.site_w);
            case EventKind::E_II:
                return anchors_meet(it.anchor1, it.anchor2);
            case EventKind::E_IR:
            case EventKind::E_IR2:
                return radius_hit(it);
            case EventKind::E_combined:
                return anchors_meet(it.anchor1, it.anchor2) && radius_hit(it);
            case EventKind::E_pt_II:
                return in_anchor_cluster(it.anchor1, it.site_u2);
            case EventKind::E_pt_R1:
            case EventKind::E_pt_R2:
                return radius_hit(it);
            case EventKind::E_pt_combined_partial:
                return in_anchor_cluster(it.anchor1, it.site_u2) && radius_hit(it);
            case EventKind::E_pt_combined_full:
                return labels.same_cluster(it.site_u1, it.site_u2) && radius_hit(it);
            case EventKind::E_interval_two_targets:
                return in_anchor_cluster(it.anchor1, it.site_u2) &&
                       in_anchor_cluster(it.anchor1, it.site_w);
        }
        return false;
    }

    const Region* region_;
    std::vector<SiteSet> anchors_;
    std::vector<Channel> channels_;
    std::vector<Item> items_;
};

// One-off evaluation of a single spec (tests, enumeration oracles). The
// sampling harness compiles whole plans instead.
inline bool evaluate(const ClusterLabels& labels, const EventSpec& spec) {
    CompiledEvents compiled(*labels.region, {spec});
    CompiledEvents::Workspace ws;
    compiled.init_workspace(ws);
    return compiled.evaluate_all(labels, ws) & 1;
}

}  // namespace percolab
