#include "partfec/galois.hpp"

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "partfec/errors.hpp"

namespace partfec::gf {

namespace {

struct LogTables {
  // exp is doubled so log[a] + log[b] indexes it without a modulo.
  std::array<Symbol, 510> exp{};
  std::array<unsigned, 256> log{};
};

constexpr LogTables make_log_tables() {
  LogTables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<Symbol>(x);
    t.exp[i + 255] = static_cast<Symbol>(x);
    t.log[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= kPolynomial;
  }
  return t;
}

constexpr LogTables kTables = make_log_tables();

static_assert(kTables.exp[8] == 0x1D, "alpha^8 must reduce by 0x11D");
static_assert(kTables.exp[255] == 1, "generator must have order 255");

struct ProductTable {
  std::array<std::array<Symbol, 256>, 256> rows{};

  ProductTable() {
    for (unsigned a = 1; a < 256; ++a) {
      for (unsigned b = 1; b < 256; ++b) {
        rows[a][b] = kTables.exp[kTables.log[a] + kTables.log[b]];
      }
    }
  }
};

const ProductTable& product_table() {
  static const auto table = std::make_unique<ProductTable>();
  return *table;
}

}  // namespace

Symbol mul(Symbol a, Symbol b) noexcept {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

Symbol inverse(Symbol a) {
  if (a == 0) throw std::domain_error("zero has no multiplicative inverse in GF(256)");
  return kTables.exp[255 - kTables.log[a]];
}

Symbol div(Symbol a, Symbol b) {
  if (b == 0) throw std::domain_error("division by zero in GF(256)");
  if (a == 0) return 0;
  return kTables.exp[kTables.log[a] + 255 - kTables.log[b]];
}

Symbol pow(Symbol base, unsigned exponent) noexcept {
  if (exponent == 0) return 1;
  if (base == 0) return 0;
  return kTables.exp[(kTables.log[base] * static_cast<unsigned long long>(exponent)) % 255];
}

const Symbol* mul_row(Symbol c) noexcept { return product_table().rows[c].data(); }

void addmul(std::span<Symbol> dst, std::span<const Symbol> src, Symbol c) noexcept {
  if (c == 0) return;
  const std::size_t len = dst.size() < src.size() ? dst.size() : src.size();
  Symbol* d = dst.data();
  const Symbol* s = src.data();
  if (c == 1) {
    for (std::size_t i = 0; i < len; ++i) d[i] ^= s[i];
    return;
  }
  const Symbol* row = mul_row(c);
  for (std::size_t i = 0; i < len; ++i) d[i] ^= row[s[i]];
}

void scale(std::span<Symbol> dst, Symbol c) noexcept {
  if (c == 1) return;
  const Symbol* row = mul_row(c);
  for (auto& x : dst) x = row[x];
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) throw std::out_of_range("row index out of range");
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::vector<Symbol> multiply(const Matrix& m, std::span<const Symbol> v) {
  if (v.size() != m.cols()) {
    throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                " does not match matrix width " + std::to_string(m.cols()));
  }
  std::vector<Symbol> out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Symbol acc = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc ^= mul(m(r, c), v[c]);
    out[r] = acc;
  }
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimensions do not agree");
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t i = 0; i < a.cols(); ++i) addmul(out.row(r), b.row(i), a(r, i));
  }
  return out;
}

Matrix invert(Matrix m) {
  if (!m.square()) throw std::invalid_argument("only square matrices can be inverted");
  const std::size_t n = m.rows();
  std::vector<std::size_t> pivot_rows(n);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col) == 0) ++pivot;
    if (pivot == n) {
      throw SingularMatrixError("matrix is singular (no pivot in column " + std::to_string(col) +
                                ")");
    }
    pivot_rows[col] = pivot;
    if (pivot != col) {
      std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(), m.row(col).begin());
    }

    auto prow = m.row(col);
    const Symbol scale_by = inverse(prow[col]);
    prow[col] = 1;
    scale(prow, scale_by);

    bool unit = true;
    for (std::size_t c = 0; c < n && unit; ++c) unit = prow[c] == (c == col ? 1 : 0);
    if (unit) continue;

    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Symbol factor = m(r, col);
      if (factor == 0) continue;
      m(r, col) = 0;
      addmul(m.row(r), prow, factor);
    }
  }

  // Row swaps on the input become column swaps on the inverse, undone in
  // reverse order.
  for (std::size_t col = n; col-- > 0;) {
    const std::size_t other = pivot_rows[col];
    if (other == col) continue;
    for (std::size_t r = 0; r < n; ++r) std::swap(m(r, col), m(r, other));
  }
  return m;
}

}  // namespace partfec::gf
