#ifndef GLSHP_ERRORS_HPP
#define GLSHP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace glshp {

// Precondition violations on numeric domains (Gamma poles, bad exponents,
// values outside the admissible order range).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An initial guess whose monomials do not fit the basis-extraction rule.
class GroupingError : public std::runtime_error {
 public:
  explicit GroupingError(const std::string& what) : std::runtime_error(what) {}
};

// Initial conditions that no coefficient assignment can satisfy.
class InconsistentIC : public std::runtime_error {
 public:
  explicit InconsistentIC(const std::string& what) : std::runtime_error(what) {}
};

// Problem-file syntax or validation failure; carries the source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int col)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace glshp

#endif  // GLSHP_ERRORS_HPP
