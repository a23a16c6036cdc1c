#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biclust {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries 1-based row/column when known (0 = unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t row, std::size_t column, const std::string& what)
      : Error(format(path, row, column, what)), path_(path), row_(row), column_(column) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& path, std::size_t row, std::size_t column,
                            const std::string& what) {
    std::string msg = path.empty() ? std::string("<input>") : path;
    if (row != 0) msg += ":row " + std::to_string(row);
    if (column != 0) msg += ":column " + std::to_string(column);
    return msg + ": " + what;
  }

  std::string path_;
  std::size_t row_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// A configured enumeration budget was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class EmptyPatternError : public Error {
 public:
  EmptyPatternError() : Error("pattern must contain at least one attribute") {}
};

class NotClosedError : public Error {
 public:
  using Error::Error;
};

class MatrixMismatchError : public Error {
 public:
  using Error::Error;
};

/// Invalid or missing pipeline parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace biclust
