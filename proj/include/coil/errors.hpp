#pragma once

#include <stdexcept>
#include <string>

namespace coil {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration, bad arguments, or inconsistent dimensions.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Unreadable/unwritable files and malformed file contents.
class IoError : public Error {
  public:
    using Error::Error;
};

/// A line-oriented input that failed to parse. `line` is 1-based.
class FormatError : public IoError {
  public:
    FormatError(const std::string& file, std::size_t line, const std::string& what)
        : IoError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class ChecksumError : public IoError {
  public:
    using IoError::IoError;
};

/// Persisted index files that disagree with each other (dimensions, counts, versions).
class StructuralError : public IoError {
  public:
    using IoError::IoError;
};

}  // namespace coil
