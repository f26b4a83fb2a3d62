#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace watchlist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or configuration violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A subject id that is not part of the score set.
class UnknownSubject : public Error {
 public:
  explicit UnknownSubject(const std::string& id)
      : Error("unknown subject '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// Ingest produced no records.
class EmptySet : public Error {
 public:
  EmptySet() : Error("empty set: no score records") {}
};

/// Malformed input row; line is 1-based in the source file.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace watchlist
