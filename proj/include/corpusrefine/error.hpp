// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corpusrefine {

/// Bad input data: unreadable files, malformed rows, violated invariants.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller-side misuse: invalid configuration or arguments.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A token was looked up in a model that never saw it.
class OutOfVocabulary : public std::out_of_range {
 public:
  explicit OutOfVocabulary(std::string token)
      : std::out_of_range("token not in vocabulary: '" + token + "'"), token_(std::move(token)) {}

  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

/// Serialized artifact could not be decoded.
class FormatError : public DataError {
 public:
  FormatError(const std::string& path, std::size_t offset, const std::string& what)
      : DataError(path + ": " + what + " (near byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace corpusrefine
