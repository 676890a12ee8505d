#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace percolab {

inline constexpr double kZ95 = 1.959963984540054;

// 95% half-width for a binomial mean: normal approximation, Wilson when
// either count is small (event probabilities down at the 1e-3 scale show up
// with a handful of hits).
inline double binomial_ci95(std::uint64_t count, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("ci of empty sample");
    double p = static_cast<double>(count) / static_cast<double>(n);
    std::uint64_t mirror = n - count;
    if (count >= 30 && mirror >= 30)
        return kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    double z2 = kZ95 * kZ95, nn = static_cast<double>(n);
    return kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

// Monte Carlo estimate of one event probability.
struct EstimateRecord {
    std::string id;
    double mean = 0.0;
    std::uint64_t n = 0;
    double ci95 = 0.0;
    double mesh = 0.0;
    std::string seed;
    std::uint64_t count = 0;
};

// Joint hit counts for up to 64 events sharing one sample stream. Integer
// accumulation merges associatively, so worker partitioning cannot change
// the totals.
class JointAccumulator {
public:
    explicit JointAccumulator(int k = 0) { reset(k); }

    void reset(int k) {
        if (k < 0 || k > 64) throw std::invalid_argument("event count out of range");
        k_ = k;
        n_ = 0;
        count_.assign(k, 0);
        pair_.assign(static_cast<std::size_t>(k) * k, 0);
    }

    void add(std::uint64_t mask) {
        ++n_;
        std::uint64_t mi = mask;
        while (mi) {
            int i = std::countr_zero(mi);
            mi &= mi - 1;
            ++count_[i];
            std::uint64_t mj = mask & ~((std::uint64_t(2) << i) - 1);  // j > i
            while (mj) {
                int j = std::countr_zero(mj);
                mj &= mj - 1;
                ++pair_[static_cast<std::size_t>(i) * k_ + j];
            }
        }
    }

    void merge(const JointAccumulator& other) {
        if (other.k_ != k_) throw std::invalid_argument("merging mismatched accumulators");
        n_ += other.n_;
        for (int i = 0; i < k_; ++i) count_[i] += other.count_[i];
        for (std::size_t i = 0; i < pair_.size(); ++i) pair_[i] += other.pair_[i];
    }

    int events() const { return k_; }
    std::uint64_t samples() const { return n_; }
    std::uint64_t count(int i) const { return count_[i]; }

    std::uint64_t pair_count(int i, int j) const {
        if (i == j) return count_[i];
        if (i > j) std::swap(i, j);
        return pair_[static_cast<std::size_t>(i) * k_ + j];
    }

    double mean(int i) const { return static_cast<double>(count_[i]) / static_cast<double>(n_); }

    // Covariance of the empirical means of events i and j.
    double covariance(int i, int j) const {
        double pij = static_cast<double>(pair_count(i, j)) / static_cast<double>(n_);
        return (pij - mean(i) * mean(j)) / static_cast<double>(n_);
    }

private:
    int k_ = 0;
    std::uint64_t n_ = 0;
    std::vector<std::uint64_t> count_;
    std::vector<std::uint64_t> pair_;
};

// Product of powers of event probabilities, e.g. the three-point ratio is
// {+2 on the joint event, -1 on each pairwise one}.
struct RatioTerm {
    int event = 0;
    int exponent = 0;
};

struct RatioRecord {
    std::string id;
    double value = 0.0;
    double ci95 = 0.0;
    double theory = std::numeric_limits<double>::quiet_NaN();
    bool estimable = false;
    std::uint64_t n = 0;
};

// First-order delta method on log scale with the shared-sample covariance:
// var(ln R) = sum_ij e_i e_j cov(p_i, p_j) / (p_i p_j).
inline RatioRecord ratio_with_ci(const JointAccumulator& acc, const std::vector<RatioTerm>& terms,
                                 const std::string& id = {}) {
    RatioRecord out;
    out.id = id;
    out.n = acc.samples();
    for (const RatioTerm& t : terms)
        if (acc.count(t.event) == 0) return out;  // unestimable, flagged not dropped
    double value = 1.0;
    for (const RatioTerm& t : terms) value *= std::pow(acc.mean(t.event), t.exponent);
    double var_log = 0.0;
    for (const RatioTerm& a : terms)
        for (const RatioTerm& b : terms)
            var_log += a.exponent * b.exponent * acc.covariance(a.event, b.event) /
                       (acc.mean(a.event) * acc.mean(b.event));
    var_log = std::max(var_log, 0.0);
    out.value = value;
    out.ci95 = kZ95 * value * std::sqrt(var_log);
    out.estimable = true;
    return out;
}

}  // namespace percolab
