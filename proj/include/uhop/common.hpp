#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uhop {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Failure categories surfaced both by the C++ core (as Error::code) and by
// the shared-library C interface (as uhop_status values).
enum class errc {
  invalid_argument = 1,
  dimension_mismatch,
  io_failure,
  malformed_file,
  degenerate_set,
  alpha_out_of_range,
  index_out_of_range,
  rank_deficient,
  bisection_failure,
  line_search_failure,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace uhop
