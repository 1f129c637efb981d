#include "glsim/rng.hpp"

#include <cmath>

namespace glsim {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    return static_cast<std::uint64_t>(prod);
}

}  // namespace

Philox4x64::Block Philox4x64::operator()(Block ctr) const {
    std::uint64_t k0 = key0_;
    std::uint64_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, hi1;
        const std::uint64_t lo0 = mulhilo(kPhiloxM0, ctr[0], hi0);
        const std::uint64_t lo1 = mulhilo(kPhiloxM1, ctr[2], hi1);
        ctr = Block{hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : cipher_(master_seed, stream_index),
      pos_(4),
      master_seed_(master_seed),
      stream_index_(stream_index) {}

void RngStream::refill() {
    // 256-bit little-endian counter increment, applied before encryption:
    // block k uses counter value k+1, matching reference implementations.
    for (int i = 0; i < 4; ++i) {
        if (++counter_[i] != 0) break;
    }
    buffer_ = cipher_(counter_);
    pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
    // (2u+1)/2^54 lies strictly inside (0,1) for u in [0, 2^53).
    return (static_cast<double>(next_u64() >> 11) * 2.0 + 1.0) * 0x1.0p-54;
}

double RngStream::exponential() {
    return -std::log(uniform_open());
}

std::vector<RngStream> seed_streams(std::uint64_t master_seed, std::size_t n) {
    std::vector<RngStream> streams;
    streams.reserve(n);
    for (std::size_t i = 0; i < n; ++i) streams.emplace_back(master_seed, i);
    return streams;
}

}  // namespace glsim
