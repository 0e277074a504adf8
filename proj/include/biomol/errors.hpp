//
// Project biomol - Copyright 2026 Biomol Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef BIOMOL_ERRORS_HPP_
#define BIOMOL_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biomol {

enum class ErrorKind {
  // string grammar
  kEmptyInput,
  kUnbalancedBracket,
  kCharacterOutsideBracket,
  kUnknownToken,
  kSyntaxError,
  kUnclosedRing,
  kUnclosedBranch,
  kUnsupportedFeature,
  kUnsupportedElement,
  // sequences
  kInvalidResidue,
  kEmptyRecord,
  // vocabulary
  kOutOfVocabulary,
  kUnknownId,
  // numeric / tensor
  kDimensionMismatch,
  kNonFiniteWeights,
  kMissingCoordinates,
  kEmptyGraph,
  kLengthMismatch,
  kEmptyCorpus,
  kMissingField,
  kAllZero,
  // io
  kParseError,
  kValidationError,
  kIoError,
};

const char* error_kind_name(ErrorKind kind);

// All throwing operations in the library raise Error. `position` is a
// 0-based character or record offset when the failure is localizable,
// npos otherwise.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorKind kind, std::string message, std::size_t position = npos)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " +
                           message),
        kind_(kind),
        position_(position) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  ErrorKind kind_;
  std::size_t position_;
};

}  // namespace biomol

#endif  // BIOMOL_ERRORS_HPP_
