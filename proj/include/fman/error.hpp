#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fman {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression source; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, int line, int column)
      : ParseError("unknown identifier '" + name + "'", line, column), name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// An elementary function or division evaluated outside its domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
  DomainError(const std::string& what, std::string subexpr, std::vector<double> point)
      : Error(what), subexpr_(std::move(subexpr)), point_(std::move(point)) {}

  const std::string& subexpression() const { return subexpr_; }
  const std::vector<double>& point() const { return point_; }

 private:
  std::string subexpr_;
  std::vector<double> point_;
};

// Spec file violates the fman-spec/1 schema; path is a JSON-pointer-like field path.
class SpecError : public Error {
 public:
  SpecError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A construction (series solve, root search, reduction) could not be completed.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace fman
