//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "biomol/tensor.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "biomol/errors.hpp"

namespace biomol {

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

void Matrix::set_row(std::size_t r, const Vector& v) {
  if (v.size() != cols_) {
    throw Error(ErrorKind::kDimensionMismatch, "row width mismatch");
  }
  std::copy(v.begin(), v.end(), data_.begin() + r * cols_);
}

bool Matrix::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::uint64_t fnv1a64(std::string_view text) {
  return fnv1a64(text.data(), text.size());
}

void TensorArchive::put(const std::string& name, const Matrix& m) {
  entries_[name] = Entry{{m.rows(), m.cols()}, m.data()};
}

void TensorArchive::put(const std::string& name, const Vector& v) {
  entries_[name] = Entry{{v.size()}, v};
}

bool TensorArchive::contains(const std::string& name) const {
  return entries_.count(name) > 0;
}

Matrix TensorArchive::matrix(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorKind::kParseError, "missing tensor " + name);
  }
  if (it->second.dims.size() != 2) {
    throw Error(ErrorKind::kParseError, name + " is not rank 2");
  }
  Matrix m(it->second.dims[0], it->second.dims[1]);
  m.data() = it->second.values;
  return m;
}

Vector TensorArchive::vector(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorKind::kParseError, "missing tensor " + name);
  }
  if (it->second.dims.size() != 1) {
    throw Error(ErrorKind::kParseError, name + " is not rank 1");
  }
  return it->second.values;
}

std::vector<std::string> TensorArchive::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

void TensorArchive::write(std::ostream& out) const {
  out << std::setprecision(17);
  for (const auto& [name, entry] : entries_) {
    out << "tensor " << name << " " << entry.dims.size();
    for (std::size_t d : entry.dims) out << " " << d;
    out << "\n";
    for (std::size_t i = 0; i < entry.values.size(); ++i) {
      if (i > 0) out << " ";
      out << entry.values[i];
    }
    out << "\n";
  }
}

TensorArchive TensorArchive::read(std::istream& in) {
  TensorArchive archive;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream header(line);
    std::string keyword, name;
    std::size_t rank = 0;
    if (!(header >> keyword >> name >> rank) || keyword != "tensor") {
      throw Error(ErrorKind::kParseError,
                  "line " + std::to_string(line_no) + ": expected tensor header");
    }
    Entry entry;
    std::size_t total = 1;
    for (std::size_t d = 0; d < rank; ++d) {
      std::size_t dim = 0;
      if (!(header >> dim) || dim == 0) {
        throw Error(ErrorKind::kParseError,
                    "line " + std::to_string(line_no) + ": bad dimensions");
      }
      entry.dims.push_back(dim);
      total *= dim;
    }
    if (!std::getline(in, line)) {
      throw Error(ErrorKind::kParseError, name + ": missing value line");
    }
    ++line_no;
    std::istringstream values(line);
    entry.values.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
      if (!(values >> entry.values[i])) {
        throw Error(ErrorKind::kParseError,
                    name + ": expected " + std::to_string(total) + " values");
      }
    }
    double extra;
    if (values >> extra) {
      throw Error(ErrorKind::kParseError, name + ": trailing values");
    }
    archive.entries_[name] = std::move(entry);
  }
  return archive;
}

}  // namespace biomol
