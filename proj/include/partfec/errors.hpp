#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace partfec {

// Code dimensions exceed what GF(2^8) can support, or a search ran past
// the field bound.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A square matrix has no inverse. For generator submatrices this means the
// code is not MDS, which must never happen.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few packets survived to rebuild the source block. lost() holds the
// erased source positions, which are exactly the packets the caller loses.
class UnrecoverableError : public std::runtime_error {
 public:
  UnrecoverableError(std::string what, std::vector<std::size_t> lost)
      : std::runtime_error(std::move(what)), lost_(std::move(lost)) {}

  const std::vector<std::size_t>& lost() const noexcept { return lost_; }
  std::size_t lost_count() const noexcept { return lost_.size(); }

 private:
  std::vector<std::size_t> lost_;
};

}  // namespace partfec
