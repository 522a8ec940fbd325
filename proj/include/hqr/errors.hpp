#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hqr {

// Base class for all library errors. Everything thrown on a domain failure
// (as opposed to a programming bug) derives from this.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class invalid_level_error : public error {
 public:
  using error::error;
};

class singular_design_error : public error {
 public:
  using error::error;
};

class not_positive_definite_error : public error {
 public:
  using error::error;
};

class dimension_error : public error {
 public:
  using error::error;
};

// Solver ran out of iterations; carries the best iterate seen so far.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, Eigen::VectorXd best)
      : error(what), best_iterate(std::move(best)) {}
  Eigen::VectorXd best_iterate;
};

class degenerate_sparsity_error : public error {
 public:
  using error::error;
};

class insufficient_data_error : public error {
 public:
  using error::error;
};

class degenerate_indicator_error : public error {
 public:
  using error::error;
};

class singular_covariance_error : public error {
 public:
  singular_covariance_error(const std::string& what, double cond)
      : error(what), condition_number(cond) {}
  double condition_number;
};

class calibration_error : public error {
 public:
  using error::error;
};

class domain_error : public error {
 public:
  using error::error;
};

// CSV / config ingestion failure; line is 1-based, 0 when not applicable.
class parse_error : public error {
 public:
  parse_error(const std::string& what, long line_number = 0)
      : error(line_number > 0 ? what + " (line " + std::to_string(line_number) + ")"
                              : what),
        line(line_number) {}
  long line;
};

}  // namespace hqr
