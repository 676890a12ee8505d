#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lattice.hpp"
#include "rng.hpp"

namespace percolab {

// One percolation sample: open/closed bit per site.
struct BitConfig {
    const Region* region = nullptr;
    std::vector<std::uint64_t> bits;

    explicit BitConfig(const Region& r)
        : region(&r), bits((static_cast<std::size_t>(r.size()) + 63) / 64, 0) {}

    bool open(SiteId s) const { return (bits[s >> 6] >> (s & 63)) & 1u; }
    void set_open(SiteId s) { bits[s >> 6] |= std::uint64_t(1) << (s & 63); }
    void set_closed(SiteId s) { bits[s >> 6] &= ~(std::uint64_t(1) << (s & 63)); }
    void clear() { std::fill(bits.begin(), bits.end(), 0); }
    void fill_open() {
        std::fill(bits.begin(), bits.end(), ~std::uint64_t(0));
        // mask tail bits beyond size() so popcounts stay meaningful
        int tail = region->size() & 63;
        if (tail != 0) bits.back() = (std::uint64_t(1) << tail) - 1;
    }

    friend bool operator==(const BitConfig& a, const BitConfig& b) {
        return a.region == b.region && a.bits == b.bits;
    }
};

// Critical sampling, p = 1/2 per site. The bit of site k in sample n is bit
// (k mod 256) of philox(seed; n, k/256, kConfig, 0), so the sample is a pure
// function of (seed, sample_index) and any worker schedule reproduces it.
inline void sample_config_into(const Region& region, const Seed128& seed,
                               std::uint64_t sample_index, BitConfig& out) {
    if (out.region != &region) out = BitConfig(region);
    const std::size_t words = out.bits.size();
    std::uint64_t block = 0;
    for (std::size_t w = 0; w < words; w += 4, ++block) {
        auto r = philox4x64(seed, sample_index, block,
                            static_cast<std::uint64_t>(RngStream::kConfig), 0);
        for (int k = 0; k < 4 && w + k < words; ++k) out.bits[w + k] = r[k];
    }
    int tail = region.size() & 63;
    if (tail != 0) out.bits.back() &= (std::uint64_t(1) << tail) - 1;
}

inline BitConfig sample_config(const Region& region, const Seed128& seed,
                               std::uint64_t sample_index) {
    BitConfig c(region);
    sample_config_into(region, seed, sample_index, c);
    return c;
}

inline constexpr std::int32_t kNullLabel = -1;

// Connected-component labels of the open subgraph; closed sites get
// kNullLabel. Labels are union-find roots, so "same cluster" is "same label".
struct ClusterLabels {
    const Region* region = nullptr;
    std::vector<std::int32_t> label;

    std::int32_t operator[](SiteId s) const { return label[s]; }
    bool open(SiteId s) const { return label[s] != kNullLabel; }
    bool same_cluster(SiteId a, SiteId b) const {
        return label[a] != kNullLabel && label[a] == label[b];
    }
};

// Reusable union-find scratch; the sampler's hot loop rebuilds labels for
// every sample, so allocations are hoisted out here.
class ClusterScratch {
public:
    void label_into(const BitConfig& config, ClusterLabels& out) {
        const Region& region = *config.region;
        const std::int32_t n = region.size();
        parent_.resize(n);
        size_.assign(n, 1);
        std::iota(parent_.begin(), parent_.end(), 0);

        const std::size_t words = config.bits.size();
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bitsleft = config.bits[w];
            while (bitsleft) {
                SiteId s = static_cast<SiteId>((w << 6) + std::countr_zero(bitsleft));
                bitsleft &= bitsleft - 1;
                const std::int32_t* fwd = region.forward_neighbors(s);
                for (int k = 0; k < 3; ++k) {
                    SiteId t = fwd[k];
                    if (t != kNoSite && config.open(t)) unite(s, t);
                }
            }
        }

        out.region = &region;
        out.label.resize(n);
        for (SiteId s = 0; s < n; ++s)
            out.label[s] = config.open(s) ? find(s) : kNullLabel;
    }

private:
    std::int32_t find(std::int32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];  // path halving
            x = parent_[x];
        }
        return x;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    std::vector<std::int32_t> parent_;
    std::vector<std::int32_t> size_;
};

inline ClusterLabels label_clusters(const BitConfig& config) {
    ClusterScratch scratch;
    ClusterLabels labels;
    scratch.label_into(config, labels);
    return labels;
}

// An event with a declared support: the function may read only those sites.
struct EventPredicate {
    std::function<bool(const BitConfig&)> fn;
    SiteSet support;

    bool operator()(const BitConfig& c) const { return fn(c); }
};

inline constexpr int kEnumerationCapBits = 25;

// Exact oracle: all 2^|support| configurations, sites outside the support
// fixed closed.
template <class F>
void enumerate_configs(const Region& region, const SiteSet& support, F&& visit) {
    if (support.size() > kEnumerationCapBits)
        throw std::invalid_argument("enumeration support exceeds 2^25 cap");
    BitConfig config(region);
    const std::uint64_t total = std::uint64_t(1) << support.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (mask != 0) {
            // Gray-style full rewrite is unnecessary: flip the bits that differ.
            std::uint64_t diff = mask ^ (mask - 1);
            for (std::size_t b = 0; diff; ++b, diff >>= 1)
                if (diff & 1) {
                    if (mask >> b & 1) config.set_open(support[b]);
                    else config.set_closed(support[b]);
                }
        }
        visit(const_cast<const BitConfig&>(config));
    }
}

// Exact probability of an event under the uniform measure on the support.
inline double enumerate_probability(const Region& region, const SiteSet& support,
                                    const std::function<bool(const BitConfig&)>& event) {
    std::uint64_t hits = 0;
    enumerate_configs(region, support, [&](const BitConfig& c) { hits += event(c); });
    return static_cast<double>(hits) / static_cast<double>(std::uint64_t(1) << support.size());
}

// Cylinder event V_A: configurations on A that admit some completion of the
// remaining support bits landing in V. Evaluated by existential
// quantification over support(V) \ A.
inline EventPredicate cylinder_event(const EventPredicate& v, const SiteSet& a) {
    SiteSet free_sites;
    for (SiteId s : v.support)
        if (!std::binary_search(a.begin(), a.end(), s)) free_sites.push_back(s);
    if (free_sites.size() > kEnumerationCapBits)
        throw std::invalid_argument("cylinder_event: free support exceeds enumeration cap");

    SiteSet support;
    for (SiteId s : v.support)
        if (std::binary_search(a.begin(), a.end(), s)) support.push_back(s);

    auto inner = v.fn;
    auto fn = [inner, free_sites, support](const BitConfig& omega) {
        BitConfig probe(*omega.region);
        for (SiteId s : support)
            if (omega.open(s)) probe.set_open(s);
        const std::uint64_t total = std::uint64_t(1) << free_sites.size();
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            for (std::size_t b = 0; b < free_sites.size(); ++b) {
                if (mask >> b & 1) probe.set_open(free_sites[b]);
                else probe.set_closed(free_sites[b]);
            }
            if (inner(probe)) return true;
        }
        return false;
    };
    return EventPredicate{std::move(fn), std::move(support)};
}

}  // namespace percolab
