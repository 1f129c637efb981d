#pragma once
// Counter-based random streams built on Philox4x64-10.
//
// Every trajectory (or experiment cell) owns a stream keyed by
// (master_seed, stream_index). Streams with distinct keys are independent,
// and a stream's output depends only on its key and draw count, never on
// scheduling, so reports are reproducible for any worker count.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace glsim {

// Philox4x64-10 block function: encrypts a 256-bit counter under a 128-bit
// key. Constants follow the Random123 reference implementation.
class Philox4x64 {
public:
    using Block = std::array<std::uint64_t, 4>;

    Philox4x64(std::uint64_t key0, std::uint64_t key1) : key0_(key0), key1_(key1) {}

    Block operator()(Block counter) const;

private:
    std::uint64_t key0_;
    std::uint64_t key1_;
};

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();
    double uniform01();     // [0,1), 53-bit resolution
    double uniform_open();  // (0,1), safe for log()
    double exponential();   // Exp(1)

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    void refill();

    Philox4x64 cipher_;
    Philox4x64::Block counter_{};
    Philox4x64::Block buffer_{};
    int pos_;
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
};

// The first n streams of a master seed, in stream-index order.
std::vector<RngStream> seed_streams(std::uint64_t master_seed, std::size_t n);

// Fixed sub-key layout for experiments: cell c, trajectory j within the cell.
// Keeps stream indices collision-free across experiment cells.
constexpr std::uint64_t stream_index_for(std::uint32_t cell, std::uint32_t traj) {
    return (static_cast<std::uint64_t>(cell) << 32) | traj;
}

}  // namespace glsim
