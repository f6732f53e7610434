#pragma once

#include <stdexcept>
#include <string>

namespace qgrade {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class zero_parameter : public error {
 public:
  zero_parameter() : error("deformation parameter must be nonzero") {}
};

class singular_power : public error {
 public:
  explicit singular_power(std::size_t level)
      : error("negative power of a vanishing eigenvalue at level " + std::to_string(level)) {}
};

class mixed_parameters : public error {
 public:
  using error::error;
};

class mixed_grades : public error {
 public:
  using error::error;
};

class dimension_mismatch : public error {
 public:
  dimension_mismatch(std::size_t a, std::size_t b)
      : error("operator dimensions differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class not_elementary : public error {
 public:
  using error::error;
};

class verification_failure : public error {
 public:
  verification_failure(std::string relation, double residual)
      : error("relation '" + relation + "' failed with residual " + std::to_string(residual)),
        relation_(std::move(relation)),
        residual_(residual) {}

  const std::string& relation() const noexcept { return relation_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string relation_;
  double residual_;
};

class parse_error : public error {
 public:
  using error::error;
};

class unknown_name : public error {
 public:
  unknown_name(const std::string& what, const std::string& name)
      : error("unknown " + what + ": '" + name + "'") {}
};

class io_failure : public error {
 public:
  using error::error;
};

}  // namespace qgrade
