#pragma once

// Counter-based random numbers (Philox4x32-10). A (seed, trial) pair
// addresses an independent stream, so trials can be distributed across any
// number of workers and still reproduce the serial results bit for bit.

#include <array>
#include <cmath>
#include <cstdint>

namespace relaysec {

struct Philox4x32 {
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;

    static std::array<std::uint32_t, 4> bijection(std::array<std::uint32_t, 4> ctr,
                                                  std::uint32_t k0, std::uint32_t k1) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(kMulA) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(kMulB) * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ k0, std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ k1, std::uint32_t(p0)};
            k0 += kWeylA;
            k1 += kWeylB;
        }
        return ctr;
    }
};

class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

    std::uint64_t next_u64() {
        if (word_ == 2) {
            const auto out = Philox4x32::bijection(
                {std::uint32_t(trial_), std::uint32_t(trial_ >> 32), std::uint32_t(block_),
                 std::uint32_t(block_ >> 32)},
                std::uint32_t(seed_), std::uint32_t(seed_ >> 32));
            buf_[0] = out[0] | (std::uint64_t(out[1]) << 32);
            buf_[1] = out[2] | (std::uint64_t(out[3]) << 32);
            ++block_;
            word_ = 0;
        }
        return buf_[word_++];
    }

    // [0, 1) with 53 random bits
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // Box-Muller; one call consumes two uniforms and yields two N(0,1) draws
    std::array<double, 2> normal_pair() {
        constexpr double kTwoPi = 6.283185307179586476925286766559;
        const double r = std::sqrt(-2.0 * std::log1p(-uniform01()));
        const double t = kTwoPi * uniform01();
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    std::uint64_t seed_, trial_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int word_ = 2;
};

}  // namespace relaysec
