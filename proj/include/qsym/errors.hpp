#pragma once

#include <stdexcept>
#include <string>

namespace qsym {

/// Failure categories raised by the algebra. The CLI maps every kind to exit
/// code 3 except ParseError (2).
enum class ErrorKind {
  PoleAtQ,
  BasisMismatch,
  FloorTooHigh,
  NotMonic,
  NotInvertibleLeading,
  NotInDomain,
  WindowNotInvariant,
  IndexOutOfFormula,
  SingularMode,
  NotSecondClass,
  SupportEscapesWindow,
};

const char* to_string(ErrorKind kind);

class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error("ParseError at " + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace qsym
