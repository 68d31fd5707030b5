#pragma once

// Code partitioning: one C(n, k) code is replaced by two independent codes
// over the first ceil(k/2) and last floor(k/2) source packets. Each half
// carries about half the parity, so encoding does about half the
// multiply-accumulates and decoding about a quarter per half.

#include <cstddef>
#include <vector>

#include "partfec/codec.hpp"
#include "partfec/errors.hpp"

namespace partfec {

class PartitionSpec {
 public:
  // Explicit halves. Requires first.k() == ceil(k/2), second.k() == floor(k/2)
  // and first.parity() + second.parity() >= parent.parity(); the surplus is
  // the excess count. Throws std::invalid_argument otherwise.
  PartitionSpec(CodeSpec parent, CodeSpec first, CodeSpec second);

  const CodeSpec& parent() const noexcept { return parent_; }
  const CodeSpec& first() const noexcept { return first_; }
  const CodeSpec& second() const noexcept { return second_; }
  std::size_t excess() const noexcept { return excess_; }

  // Offset of the second half's source packets in the parent block.
  std::size_t second_offset() const noexcept { return first_.k(); }

  friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;

 private:
  CodeSpec parent_;
  CodeSpec first_;
  CodeSpec second_;
  std::size_t excess_;
};

// Splits k as (ceil, floor) and the parent's parity as (ceil, floor), then
// hands out `excess` extra parity packets alternately, first half first.
// Throws std::invalid_argument if either half would get no parity and
// CapacityError if the two halves together would exceed 255 packets.
PartitionSpec split(const CodeSpec& parent, std::size_t excess);

struct PartitionedBlocks {
  PacketBlock first;
  PacketBlock second;
};

class PartitionedCodec {
 public:
  explicit PartitionedCodec(PartitionSpec spec);

  const PartitionSpec& spec() const noexcept { return spec_; }
  const GeneratorMatrix& first() const noexcept { return first_; }
  const GeneratorMatrix& second() const noexcept { return second_; }

 private:
  PartitionSpec spec_;
  GeneratorMatrix first_;
  GeneratorMatrix second_;
};

// Raised when at least one half cannot be decoded. lost() lists the lost
// source positions in parent numbering, first half before second.
class PartitionUnrecoverableError : public UnrecoverableError {
 public:
  PartitionUnrecoverableError(std::string what, std::vector<std::size_t> lost, bool first_failed,
                              bool second_failed)
      : UnrecoverableError(std::move(what), std::move(lost)),
        first_failed_(first_failed),
        second_failed_(second_failed) {}

  bool first_failed() const noexcept { return first_failed_; }
  bool second_failed() const noexcept { return second_failed_; }

 private:
  bool first_failed_;
  bool second_failed_;
};

// Splits a parent-k source block contiguously and encodes each half.
PartitionedBlocks encode_partitioned(const PartitionedCodec& codec, const PacketBlock& source,
                                     MacCounter* counter = nullptr);

// `out` halves must be sized n1 and n2 slots of the source's packet size.
void encode_partitioned_into(const PartitionedCodec& codec, const PacketBlock& source,
                             PartitionedBlocks& out, MacCounter* counter = nullptr);

// Decodes both halves independently and reassembles the parent block.
// Throws PartitionUnrecoverableError if either half fails.
PacketBlock decode_partitioned(const PartitionedCodec& codec, const PartitionedBlocks& received,
                               DecodeStats* stats = nullptr);

// `out` must have parent-k slots of the halves' packet size.
void decode_partitioned_into(const PartitionedCodec& codec, const PartitionedBlocks& received,
                             PacketBlock& out, DecodeStats* stats = nullptr);

}  // namespace partfec
