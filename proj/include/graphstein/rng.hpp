#ifndef GRAPHSTEIN_RNG_HPP
#define GRAPHSTEIN_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace graphstein {

// Counter-based pseudo-random stream: Philox4x64 with 10 rounds (the
// Random123 family; same core permutation as numpy.random.Philox, verified
// against it in the test suite).
//
// A stream is identified by the 128-bit key (seed, stream). Distinct
// (seed, stream) pairs give statistically independent streams, so parallel
// replications simply use stream = replication index. Output depends only on
// (key, block counter); no state is shared between streams.
class RngStream {
  public:
    explicit RngStream(uint64_t seed, uint64_t stream = 0) : key_{seed, stream} {}

    uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = block(key_[0], key_[1], counter_++);
            pos_ = 0;
        }
        return buf_[static_cast<size_t>(pos_++)];
    }

    // Uniform on [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Unbiased integer in [0, n), n >= 1, by rejection.
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Marsaglia's polar method; second value cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // One Philox4x64-10 block: four 64-bit words from (key, counter).
    static std::array<uint64_t, 4> block(uint64_t seed, uint64_t stream, uint64_t counter) {
        constexpr uint64_t m0 = 0xD2E7470EE14C6C93ull;
        constexpr uint64_t m1 = 0xCA5A826395121157ull;
        constexpr uint64_t w0 = 0x9E3779B97F4A7C15ull;
        constexpr uint64_t w1 = 0xBB67AE8584CAA73Bull;

        uint64_t c0 = counter, c1 = 0, c2 = 0, c3 = 0;
        uint64_t k0 = seed, k1 = stream;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 p0 = static_cast<unsigned __int128>(m0) * c0;
            const unsigned __int128 p1 = static_cast<unsigned __int128>(m1) * c2;
            const uint64_t hi0 = static_cast<uint64_t>(p0 >> 64), lo0 = static_cast<uint64_t>(p0);
            const uint64_t hi1 = static_cast<uint64_t>(p1 >> 64), lo1 = static_cast<uint64_t>(p1);
            const uint64_t n0 = hi1 ^ c1 ^ k0;
            const uint64_t n1 = lo1;
            const uint64_t n2 = hi0 ^ c3 ^ k1;
            const uint64_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += w0;
            k1 += w1;
        }
        return {c0, c1, c2, c3};
    }

  private:
    std::array<uint64_t, 2> key_;
    uint64_t counter_ = 0;
    std::array<uint64_t, 4> buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace graphstein

#endif
