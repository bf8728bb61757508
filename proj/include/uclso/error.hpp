#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uclso {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class invalid_argument_error : public error {
  public:
    using error::error;
};

/// Malformed input file. Carries the 1-based line number when one is known.
class parse_error : public error {
  public:
    parse_error(std::string file, std::size_t line, const std::string &what)
        : error(file + (line > 0 ? ":" + std::to_string(line) : std::string{}) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    [[nodiscard]] const std::string &file() const noexcept { return file_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::string file_;
    std::size_t line_;
};

/// A label cannot be used for the requested operation (no minority points, single class, ...).
class label_error : public error {
  public:
    using error::error;
};

}  // namespace uclso
