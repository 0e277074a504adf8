//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_TENSOR_HPP_
#define BIOMOL_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace biomol {

using Vector = std::vector<double>;

// Row-major dense matrix. Deliberately small: fixed summation order keeps
// results bit-identical across runs.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  Vector row(std::size_t r) const;
  void set_row(std::size_t r, const Vector& v);
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// SplitMix64: the seedable counter PRNG used for every stochastic choice
// in the library. Byte-identical streams on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1), 53-bit mantissa.
  double next_double();
  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(std::string_view text);

// Named-tensor text archive ("IBMT v1"): per tensor a header line
//   tensor <name> <rank> <dim...>
// followed by one line of whitespace-separated decimal floats, row-major.
// Rank 1 entries round-trip as vectors, rank 2 as matrices.
class TensorArchive {
 public:
  void put(const std::string& name, const Matrix& m);
  void put(const std::string& name, const Vector& v);

  bool contains(const std::string& name) const;
  // Throws ParseError when absent or the wrong rank.
  Matrix matrix(const std::string& name) const;
  Vector vector(const std::string& name) const;
  std::vector<std::string> names() const;

  void write(std::ostream& out) const;
  static TensorArchive read(std::istream& in);

 private:
  struct Entry {
    std::vector<std::size_t> dims;
    std::vector<double> values;
  };
  std::map<std::string, Entry> entries_;
};

}  // namespace biomol

#endif  // BIOMOL_TENSOR_HPP_
