#include "partfec/codec.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "partfec/errors.hpp"

namespace partfec {

CodeSpec::CodeSpec(std::size_t n, std::size_t k) : n_(n), k_(k) {
  if (k == 0) throw std::invalid_argument("code needs at least one source packet");
  if (n <= k) {
    throw std::invalid_argument("code C(" + std::to_string(n) + "," + std::to_string(k) +
                                ") needs at least one parity packet");
  }
  if (n > kMaxCodeLength) {
    throw CapacityError("code length " + std::to_string(n) + " exceeds the GF(256) bound of " +
                        std::to_string(kMaxCodeLength));
  }
}

PacketBlock::PacketBlock(std::size_t slots, std::size_t packet_size)
    : packet_size_(packet_size), present_(slots, 0), data_(slots * packet_size, 0) {}

std::size_t PacketBlock::present_count() const noexcept {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), 1));
}

void PacketBlock::set(std::size_t i, std::span<const gf::Symbol> bytes) {
  if (bytes.size() != packet_size_) {
    throw std::invalid_argument("packet of " + std::to_string(bytes.size()) +
                                " bytes in a block of " + std::to_string(packet_size_) +
                                "-byte packets");
  }
  auto dst = emplace(i);
  std::copy(bytes.begin(), bytes.end(), dst.begin());
}

void PacketBlock::erase_all() noexcept { std::fill(present_.begin(), present_.end(), 0); }

std::span<gf::Symbol> PacketBlock::emplace(std::size_t i) {
  present_.at(i) = 1;
  return buffer(i);
}

std::span<const gf::Symbol> PacketBlock::packet(std::size_t i) const {
  if (!present(i)) throw std::logic_error("packet " + std::to_string(i) + " is erased");
  return buffer(i);
}

bool operator==(const PacketBlock& a, const PacketBlock& b) {
  if (a.slots() != b.slots() || a.packet_size_ != b.packet_size_) return false;
  for (std::size_t i = 0; i < a.slots(); ++i) {
    if (a.present_[i] != b.present_[i]) return false;
    if (a.present_[i] && !std::ranges::equal(a.buffer(i), b.buffer(i))) return false;
  }
  return true;
}

GeneratorMatrix build_generator(const CodeSpec& spec) {
  const std::size_t n = spec.n();
  const std::size_t k = spec.k();

  gf::Matrix vandermonde(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      vandermonde(r, c) = gf::pow(static_cast<gf::Symbol>(r), static_cast<unsigned>(c));
    }
  }

  std::vector<std::size_t> top(k);
  std::iota(top.begin(), top.end(), std::size_t{0});
  const gf::Matrix top_inverse = gf::invert(vandermonde.select_rows(top));
  gf::Matrix systematic = gf::multiply(vandermonde, top_inverse);
  return GeneratorMatrix(spec, std::move(systematic));
}

namespace {

void check_source(const CodeSpec& spec, const PacketBlock& source) {
  if (source.slots() != spec.k() || source.present_count() != spec.k()) {
    throw std::invalid_argument("encoder expects exactly " + std::to_string(spec.k()) +
                                " present source packets");
  }
}

void check_range(const CodeSpec& spec, const PacketBlock& source, std::size_t offset) {
  if (offset + spec.k() > source.slots()) {
    throw std::invalid_argument("source block too short for the code");
  }
  for (std::size_t i = offset; i < offset + spec.k(); ++i) {
    if (!source.present(i)) {
      throw std::invalid_argument("source packet " + std::to_string(i) + " is missing");
    }
  }
}

}  // namespace

PacketBlock encode(const GeneratorMatrix& gen, const PacketBlock& source, MacCounter* counter) {
  check_source(gen.spec(), source);
  PacketBlock out(gen.spec().n(), source.packet_size());
  encode_into(gen, source, out, counter);
  return out;
}

void encode_into(const GeneratorMatrix& gen, const PacketBlock& source, std::size_t offset,
                 PacketBlock& out, MacCounter* counter) {
  const CodeSpec& spec = gen.spec();
  check_range(spec, source, offset);
  if (out.slots() != spec.n() || out.packet_size() != source.packet_size()) {
    throw std::invalid_argument("output block does not match code length and packet size");
  }

  for (std::size_t i = 0; i < spec.k(); ++i) out.set(i, source.packet(offset + i));

  for (std::size_t j = 0; j < spec.parity(); ++j) {
    auto parity = out.emplace(spec.k() + j);
    std::fill(parity.begin(), parity.end(), 0);
    const auto coefficients = gen.parity_row(j);
    for (std::size_t i = 0; i < spec.k(); ++i) {
      gf::addmul(parity, source.packet(offset + i), coefficients[i]);
    }
  }
  if (counter) counter->per_byte += spec.parity() * spec.k();
}

std::vector<std::size_t> decoding_rows(const CodeSpec& spec, const PacketBlock& received) {
  std::vector<std::size_t> rows;
  rows.reserve(spec.k());
  for (std::size_t i = 0; i < spec.n() && rows.size() < spec.k(); ++i) {
    if (received.present(i)) rows.push_back(i);
  }
  if (rows.size() < spec.k()) rows.clear();
  return rows;
}

PacketBlock decode(const GeneratorMatrix& gen, const PacketBlock& received, DecodeStats* stats) {
  PacketBlock out(gen.spec().k(), received.packet_size());
  decode_into(gen, received, out, stats);
  return out;
}

void decode_into(const GeneratorMatrix& gen, const PacketBlock& received, PacketBlock& out,
                 std::size_t offset, DecodeStats* stats) {
  const CodeSpec& spec = gen.spec();
  const std::size_t k = spec.k();
  if (received.slots() != spec.n()) {
    throw std::invalid_argument("received block has " + std::to_string(received.slots()) +
                                " slots, code length is " + std::to_string(spec.n()));
  }
  if (offset + k > out.slots() || out.packet_size() != received.packet_size()) {
    throw std::invalid_argument("output block does not match block length and packet size");
  }

  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < k; ++i) {
    if (!received.present(i)) missing.push_back(i);
  }

  const auto rows = decoding_rows(spec, received);
  if (rows.empty()) {
    throw UnrecoverableError(std::to_string(received.present_count()) + " of " +
                                 std::to_string(spec.n()) + " packets received, " +
                                 std::to_string(k) + " needed; " +
                                 std::to_string(missing.size()) + " source packets lost",
                             std::move(missing));
  }

  for (std::size_t i = 0; i < k; ++i) {
    if (received.present(i)) out.set(offset + i, received.packet(i));
  }
  if (missing.empty()) return;

  const gf::Matrix inverse = gf::invert(gen.matrix().select_rows(rows));
  for (const std::size_t i : missing) {
    auto dst = out.emplace(offset + i);
    std::fill(dst.begin(), dst.end(), 0);
    const auto coefficients = inverse.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      gf::addmul(dst, received.packet(rows[j]), coefficients[j]);
    }
  }
  if (stats) {
    stats->inversions += 1;
    stats->macs_per_byte += missing.size() * k;
  }
}

}  // namespace partfec
