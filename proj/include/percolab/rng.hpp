#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <stdexcept>

namespace percolab {

// Counter-based generator (Philox 4x64, 10 rounds). A block of 256 random
// bits is a pure function of (key, counter), so any parallel schedule that
// partitions counters reproduces the same stream bit for bit.

struct Seed128 {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    friend bool operator==(const Seed128& a, const Seed128& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// Accepts decimal or 0x-prefixed hex, up to 128 bits.
inline Seed128 parse_seed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty seed");
    Seed128 out;
    bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
    std::size_t start = hex ? 2 : 0;
    for (std::size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        unsigned digit;
        if (c >= '0' && c <= '9') digit = static_cast<unsigned>(c - '0');
        else if (hex && c >= 'a' && c <= 'f') digit = static_cast<unsigned>(c - 'a' + 10);
        else if (hex && c >= 'A' && c <= 'F') digit = static_cast<unsigned>(c - 'A' + 10);
        else throw std::invalid_argument("bad seed character in '" + text + "'");
        unsigned base = hex ? 16 : 10;
        // out = out * base + digit, 128-bit
        unsigned __int128 v = (static_cast<unsigned __int128>(out.hi) << 64) | out.lo;
        v = v * base + digit;
        out.lo = static_cast<std::uint64_t>(v);
        out.hi = static_cast<std::uint64_t>(v >> 64);
    }
    return out;
}

inline std::string seed_to_string(const Seed128& s) {
    char buf[36];
    if (s.hi == 0) std::snprintf(buf, sizeof buf, "0x%llx", (unsigned long long)s.lo);
    else std::snprintf(buf, sizeof buf, "0x%llx%016llx", (unsigned long long)s.hi, (unsigned long long)s.lo);
    return buf;
}

namespace detail {

inline constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73Bull;

inline void philox_round(std::array<std::uint64_t, 4>& c, std::uint64_t k0, std::uint64_t k1) {
    unsigned __int128 p0 = static_cast<unsigned __int128>(kPhiloxM0) * c[0];
    unsigned __int128 p1 = static_cast<unsigned __int128>(kPhiloxM1) * c[2];
    std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64), lo0 = static_cast<std::uint64_t>(p0);
    std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64), lo1 = static_cast<std::uint64_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace detail

// One 256-bit block. counter = (c0, c1, c2, c3); the caller owns the
// counter layout convention.
inline std::array<std::uint64_t, 4> philox4x64(const Seed128& seed,
                                               std::uint64_t c0, std::uint64_t c1,
                                               std::uint64_t c2, std::uint64_t c3) {
    std::array<std::uint64_t, 4> ctr = {c0, c1, c2, c3};
    std::uint64_t k0 = seed.lo, k1 = seed.hi;
    detail::philox_round(ctr, k0, k1);
    for (int r = 1; r < 10; ++r) {
        k0 += detail::kPhiloxW0;
        k1 += detail::kPhiloxW1;
        detail::philox_round(ctr, k0, k1);
    }
    return ctr;
}

// Stream contexts keep unrelated consumers of the same seed apart.
enum class RngStream : std::uint64_t {
    kConfig = 0,       // site configurations: counter (sample_index, block, stream, 0)
    kWalk = 1,         // random-walk steps for the radius estimator
    kCalibration = 2,  // calibration walks (region-free)
};

// Buffered 3-bit draws in {0..5} for walks on the triangular lattice.
// Values 6 and 7 are rejected, which keeps the six directions uniform.
class DirectionStream {
public:
    DirectionStream(const Seed128& seed, RngStream stream, std::uint64_t walk_id)
        : seed_(seed), stream_(static_cast<std::uint64_t>(stream)), walk_(walk_id) {}

    int next() {
        for (;;) {
            if (bit_pos_ > 61) refill_word();
            unsigned v = static_cast<unsigned>((word_ >> bit_pos_) & 7u);
            bit_pos_ += 3;
            if (v < 6) return static_cast<int>(v);
        }
    }

private:
    void refill_word() {
        if (word_idx_ == 4) {
            block_ = philox4x64(seed_, walk_, block_counter_++, stream_, 0);
            word_idx_ = 0;
        }
        word_ = block_[word_idx_++];
        bit_pos_ = 0;
    }

    Seed128 seed_;
    std::uint64_t stream_;
    std::uint64_t walk_;
    std::uint64_t block_counter_ = 0;
    std::array<std::uint64_t, 4> block_{};
    int word_idx_ = 4;
    std::uint64_t word_ = 0;
    int bit_pos_ = 64;
};

}  // namespace percolab
