#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace kdvh {

/// Compact scientific form for diagnostics in error messages.
inline std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Base of every error raised by the library. Each subclass carries the
/// CLI exit code it maps to.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 3; }
};

/// Invalid parameters or a malformed input file.
class config_error : public error {
 public:
  using error::error;
  int exit_code() const noexcept override { return 2; }
};

/// Symbolic failures: a polynomial that should be exact is not, or an
/// identity does not hold.
class symbolic_error : public error {
 public:
  using error::error;
  int exit_code() const noexcept override { return 4; }
};

class not_exact : public symbolic_error {
 public:
  explicit not_exact(const std::string& what)
      : symbolic_error("not a total x-derivative: " + what) {}
};

class normalization_failed : public symbolic_error {
 public:
  using symbolic_error::symbolic_error;
};

/// Numerical failures (exit code 3).
class numerical_error : public error {
 public:
  using error::error;
};

class pole_hit : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class degenerate_tau : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class grid_too_coarse : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class property_violated : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class blow_up : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class unresolved : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class seam_contamination : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

}  // namespace kdvh
