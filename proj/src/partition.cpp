#include "partfec/partition.hpp"

#include <stdexcept>
#include <string>

namespace partfec {

namespace {

std::string describe(const CodeSpec& s) {
  return "C(" + std::to_string(s.n()) + "," + std::to_string(s.k()) + ")";
}

}  // namespace

PartitionSpec::PartitionSpec(CodeSpec parent, CodeSpec first, CodeSpec second)
    : parent_(parent), first_(first), second_(second), excess_(0) {
  const std::size_t k = parent.k();
  if (first.k() != (k + 1) / 2 || second.k() != k / 2) {
    throw std::invalid_argument("halves " + describe(first) + " + " + describe(second) +
                                " do not split the " + std::to_string(k) +
                                " source packets as (ceil, floor)");
  }
  const std::size_t parity = first.parity() + second.parity();
  if (parity < parent.parity()) {
    throw std::invalid_argument("halves carry " + std::to_string(parity) +
                                " parity packets, fewer than the parent's " +
                                std::to_string(parent.parity()));
  }
  excess_ = parity - parent.parity();
}

PartitionSpec split(const CodeSpec& parent, std::size_t excess) {
  if (parent.k() < 2) throw std::invalid_argument("cannot partition a single-packet block");
  const std::size_t parity = parent.parity();
  const std::size_t k1 = (parent.k() + 1) / 2;
  const std::size_t k2 = parent.k() / 2;
  const std::size_t p1 = (parity + 1) / 2 + (excess + 1) / 2;
  const std::size_t p2 = parity / 2 + excess / 2;
  if (p1 == 0 || p2 == 0) {
    throw std::invalid_argument("splitting " + describe(parent) + " with " +
                                std::to_string(excess) +
                                " excess packets leaves a half without parity");
  }
  if (parent.k() + p1 + p2 > kMaxCodeLength) {
    throw CapacityError("splitting " + describe(parent) + " with " + std::to_string(excess) +
                        " excess packets exceeds " + std::to_string(kMaxCodeLength) +
                        " packets per block");
  }
  return PartitionSpec(parent, CodeSpec(k1 + p1, k1), CodeSpec(k2 + p2, k2));
}

PartitionedCodec::PartitionedCodec(PartitionSpec spec)
    : spec_(spec), first_(build_generator(spec.first())), second_(build_generator(spec.second())) {}

namespace {

void check_parent_source(const PartitionSpec& spec, const PacketBlock& source) {
  if (source.slots() != spec.parent().k() || source.present_count() != spec.parent().k()) {
    throw std::invalid_argument("partitioned encoder expects exactly " +
                                std::to_string(spec.parent().k()) + " present source packets");
  }
}

}  // namespace

PartitionedBlocks encode_partitioned(const PartitionedCodec& codec, const PacketBlock& source,
                                     MacCounter* counter) {
  const PartitionSpec& spec = codec.spec();
  check_parent_source(spec, source);
  PartitionedBlocks out{PacketBlock(spec.first().n(), source.packet_size()),
                        PacketBlock(spec.second().n(), source.packet_size())};
  encode_partitioned_into(codec, source, out, counter);
  return out;
}

void encode_partitioned_into(const PartitionedCodec& codec, const PacketBlock& source,
                             PartitionedBlocks& out, MacCounter* counter) {
  const PartitionSpec& spec = codec.spec();
  check_parent_source(spec, source);
  encode_into(codec.first(), source, 0, out.first, counter);
  encode_into(codec.second(), source, spec.second_offset(), out.second, counter);
}

PacketBlock decode_partitioned(const PartitionedCodec& codec, const PartitionedBlocks& received,
                               DecodeStats* stats) {
  const PartitionSpec& spec = codec.spec();
  PacketBlock out(spec.parent().k(), received.first.packet_size());
  decode_partitioned_into(codec, received, out, stats);
  return out;
}

void decode_partitioned_into(const PartitionedCodec& codec, const PartitionedBlocks& received,
                             PacketBlock& out, DecodeStats* stats) {
  const PartitionSpec& spec = codec.spec();
  if (received.first.packet_size() != received.second.packet_size()) {
    throw std::invalid_argument("halves use different packet sizes");
  }

  std::vector<std::size_t> lost;
  bool first_failed = false;
  bool second_failed = false;
  std::string reason;

  try {
    decode_into(codec.first(), received.first, out, 0, stats);
  } catch (const UnrecoverableError& e) {
    first_failed = true;
    lost.insert(lost.end(), e.lost().begin(), e.lost().end());
    reason = "first half: " + std::string(e.what());
  }
  try {
    decode_into(codec.second(), received.second, out, spec.second_offset(), stats);
  } catch (const UnrecoverableError& e) {
    second_failed = true;
    for (const std::size_t i : e.lost()) lost.push_back(i + spec.second_offset());
    reason += (reason.empty() ? "" : "; ") + std::string("second half: ") + e.what();
  }
  if (first_failed || second_failed) {
    throw PartitionUnrecoverableError(std::move(reason), std::move(lost), first_failed,
                                      second_failed);
  }
}

}  // namespace partfec
