#pragma once

// Arithmetic in GF(2^8) and dense matrices over it.
//
// The field is built from the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1
// (0x11D) with generator 2. Scalar products go through log/antilog tables;
// bulk packet kernels use a 64 KiB product table derived from them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace partfec::gf {

using Symbol = std::uint8_t;

inline constexpr unsigned kPolynomial = 0x11D;
inline constexpr unsigned kFieldSize = 256;

Symbol mul(Symbol a, Symbol b) noexcept;

// Throws std::domain_error for a == 0.
Symbol inverse(Symbol a);

Symbol div(Symbol a, Symbol b);

Symbol pow(Symbol base, unsigned exponent) noexcept;

inline constexpr Symbol add(Symbol a, Symbol b) noexcept {
  return static_cast<Symbol>(a ^ b);
}

// Row `c` of the full product table: mul_row(c)[x] == mul(c, x).
const Symbol* mul_row(Symbol c) noexcept;

// dst[i] ^= c * src[i]. Sizes must match.
void addmul(std::span<Symbol> dst, std::span<const Symbol> src, Symbol c) noexcept;

// dst[i] = c * dst[i].
void scale(std::span<Symbol> dst, Symbol c) noexcept;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Symbol& operator()(std::size_t r, std::size_t c) noexcept { return cells_[r * cols_ + c]; }
  Symbol operator()(std::size_t r, std::size_t c) const noexcept { return cells_[r * cols_ + c]; }

  std::span<Symbol> row(std::size_t r) noexcept { return {cells_.data() + r * cols_, cols_}; }
  std::span<const Symbol> row(std::size_t r) const noexcept {
    return {cells_.data() + r * cols_, cols_};
  }

  std::span<const Symbol> cells() const noexcept { return cells_; }

  // Matrix built from the listed rows of this one, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> cells_;
};

// m * v. Throws std::invalid_argument when v.size() != m.cols().
std::vector<Symbol> multiply(const Matrix& m, std::span<const Symbol> v);

// a * b. Throws std::invalid_argument on inner dimension mismatch.
Matrix multiply(const Matrix& a, const Matrix& b);

// Gauss-Jordan inversion in place, pivoting on the first nonzero entry at or
// below the diagonal. Throws std::invalid_argument for non-square input and
// SingularMatrixError when no pivot exists.
//
// Pivot rows that are already unit vectors skip elimination entirely, and
// rows with a zero in the pivot column are left alone, so a decoding matrix
// made mostly of identity rows costs O(k^2 + k*e^2) for e parity rows
// rather than O(k^3).
Matrix invert(Matrix m);

}  // namespace partfec::gf
