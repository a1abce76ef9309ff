#pragma once

#include <stdexcept>
#include <string>

namespace paretobin {

// Error taxonomy used across the library. Parse/input problems map to CLI
// exit code 2, numeric failures to exit code 3.

struct invalid_distribution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct divergence_undefined_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_binning_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_parameter_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct non_normalizable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct undefined_conditional_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct too_large_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct no_gain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct negativity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct insufficient_samples_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct fit_failed_error : std::runtime_error {
  fit_failed_error(const std::string& msg, double best_nll)
      : std::runtime_error(msg), best_so_far_nll(best_nll) {}
  double best_so_far_nll;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, long line_no = -1)
      : std::runtime_error(line_no >= 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
        line(line_no) {}
  long line;
};

struct inconsistent_inputs_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace paretobin
