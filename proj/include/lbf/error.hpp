#pragma once

#include <stdexcept>
#include <string>

namespace lbf {

/// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorKind {
  InvalidArgument,  // bad configuration or precondition violation
  Parse,            // malformed input data
  Io,               // file could not be opened/read/written
  Infeasible,       // constraint cannot be satisfied (e.g. angle rejection cap)
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline void require(bool cond, const std::string& what, ErrorKind kind = ErrorKind::InvalidArgument) {
  if (!cond) throw Error(kind, what);
}

}  // namespace lbf
