// Error taxonomy shared across the workbench. Semantic error values (err)
// are ordinary values, never exceptions; everything here reports misuse of
// the library surface or malformed inputs.
#pragma once

#include <stdexcept>
#include <string>

namespace wpwb {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SyntaxError : Error {
  int line;
  int column;
  SyntaxError(const std::string& msg, int line_, int col_)
      : Error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_),
        column(col_) {}
};

struct DuplicateLabel : Error {
  explicit DuplicateLabel(int label)
      : Error("duplicate label ^" + std::to_string(label)) {}
};

struct UndeclaredVariable : Error {
  explicit UndeclaredVariable(const std::string& name)
      : Error("undeclared variable '" + name + "'") {}
};

struct UnboundVariable : Error {
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'") {}
};

struct FormatTooLarge : Error {
  explicit FormatTooLarge(const std::string& what)
      : Error("format too large to enumerate: " + what) {}
};

struct DomainMismatch : Error {
  explicit DomainMismatch(const std::string& what)
      : Error("answer-domain mismatch: " + what) {}
};

struct NoInputModel : Error {
  explicit NoInputModel(const std::string& what)
      : Error("no input model configured: " + what) {}
};

struct NoModelForSite : Error {
  explicit NoModelForSite(int label)
      : Error("no input model for site ^" + std::to_string(label)) {}
};

struct NonMonotoneCapacity : Error {
  NonMonotoneCapacity() : Error("capacity is not monotone") {}
};

struct SpaceTooLarge : Error {
  explicit SpaceTooLarge(const std::string& what)
      : Error("outcome space too large: " + what) {}
};

struct FileFormatError : Error {
  explicit FileFormatError(const std::string& msg) : Error(msg) {}
};

}  // namespace wpwb
