#pragma once

// Systematic MDS erasure code over GF(2^8) at packet granularity.
//
// A C(n, k) code turns k source packets into n packets, the first k of which
// are the source packets unchanged. Any k of the n packets recover the block.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "partfec/galois.hpp"

namespace partfec {

inline constexpr std::size_t kMaxCodeLength = 255;

class CodeSpec {
 public:
  // Requires 1 <= k < n. Throws std::invalid_argument for malformed
  // dimensions and CapacityError for n > 255.
  CodeSpec(std::size_t n, std::size_t k);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t parity() const noexcept { return n_ - k_; }

  friend bool operator==(const CodeSpec&, const CodeSpec&) = default;

 private:
  std::size_t n_;
  std::size_t k_;
};

// n slots of packet_size bytes; each slot is either present or erased.
class PacketBlock {
 public:
  PacketBlock() = default;
  PacketBlock(std::size_t slots, std::size_t packet_size);

  std::size_t slots() const noexcept { return present_.size(); }
  std::size_t packet_size() const noexcept { return packet_size_; }

  bool present(std::size_t i) const { return present_.at(i) != 0; }
  std::size_t present_count() const noexcept;

  // Throws std::invalid_argument if bytes.size() != packet_size().
  void set(std::size_t i, std::span<const gf::Symbol> bytes);
  void erase(std::size_t i) { present_.at(i) = 0; }
  void erase_all() noexcept;

  // Marks slot i present and returns its buffer for the caller to fill.
  std::span<gf::Symbol> emplace(std::size_t i);

  // Throws std::logic_error when slot i is erased.
  std::span<const gf::Symbol> packet(std::size_t i) const;

  friend bool operator==(const PacketBlock&, const PacketBlock&);

 private:
  std::span<gf::Symbol> buffer(std::size_t i) noexcept {
    return {data_.data() + i * packet_size_, packet_size_};
  }
  std::span<const gf::Symbol> buffer(std::size_t i) const noexcept {
    return {data_.data() + i * packet_size_, packet_size_};
  }

  std::size_t packet_size_ = 0;
  std::vector<std::uint8_t> present_;
  std::vector<gf::Symbol> data_;
};

class GeneratorMatrix {
 public:
  const CodeSpec& spec() const noexcept { return spec_; }
  const gf::Matrix& matrix() const noexcept { return matrix_; }

  // Coefficients of parity packet j (0-based) over the k source packets.
  std::span<const gf::Symbol> parity_row(std::size_t j) const { return matrix_.row(spec_.k() + j); }

 private:
  friend GeneratorMatrix build_generator(const CodeSpec& spec);
  GeneratorMatrix(CodeSpec spec, gf::Matrix matrix) : spec_(spec), matrix_(std::move(matrix)) {}

  CodeSpec spec_;
  gf::Matrix matrix_;
};

// Vandermonde rows at evaluation points 0..n-1, right-multiplied by the
// inverse of the top k x k block so that block becomes the identity.
GeneratorMatrix build_generator(const CodeSpec& spec);

// Symbol multiply-accumulates per byte position, i.e. one count per
// coefficient applied to a whole packet.
struct MacCounter {
  std::uint64_t per_byte = 0;
};

struct DecodeStats {
  std::uint64_t inversions = 0;
  std::uint64_t macs_per_byte = 0;
};

// Takes a block of k present packets and returns n packets, source first.
PacketBlock encode(const GeneratorMatrix& gen, const PacketBlock& source,
                   MacCounter* counter = nullptr);

// Encodes source packets [offset, offset + k) into `out`, which must already
// have n slots of the source's packet size. Nothing is allocated.
void encode_into(const GeneratorMatrix& gen, const PacketBlock& source, std::size_t offset,
                 PacketBlock& out, MacCounter* counter = nullptr);

inline void encode_into(const GeneratorMatrix& gen, const PacketBlock& source, PacketBlock& out,
                        MacCounter* counter = nullptr) {
  encode_into(gen, source, 0, out, counter);
}

// Recovers the k source packets from any k of n received packets.
// Throws UnrecoverableError listing the erased source positions when fewer
// than k packets are present.
PacketBlock decode(const GeneratorMatrix& gen, const PacketBlock& received,
                   DecodeStats* stats = nullptr);

// As decode, writing the k packets to slots [offset, offset + k) of a
// preallocated block.
void decode_into(const GeneratorMatrix& gen, const PacketBlock& received, PacketBlock& out,
                 std::size_t offset, DecodeStats* stats = nullptr);

inline void decode_into(const GeneratorMatrix& gen, const PacketBlock& received, PacketBlock& out,
                        DecodeStats* stats = nullptr) {
  decode_into(gen, received, out, 0, stats);
}

// Rows chosen for decoding: present source rows in order, then present
// parity rows in ascending index, k in total. Empty if fewer than k present.
std::vector<std::size_t> decoding_rows(const CodeSpec& spec, const PacketBlock& received);

}  // namespace partfec
