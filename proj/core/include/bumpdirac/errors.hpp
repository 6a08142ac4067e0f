#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bumpdirac {

enum class ErrorKind {
  geometry,
  shape,
  degenerate_profile,
  domain,
  gap_parameter,
  integration,
  singular_parameter,
  inconsistent_matrix,
  degenerate_solution,
  configuration,
  selection_failure,
  resolution,
  resolvent_parameter,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace bumpdirac
