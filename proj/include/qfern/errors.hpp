#pragma once

#include <stdexcept>
#include <string>

namespace qfern {

enum class Errc {
  invalid_parameter,
  parse_error,
  io_error,
  directed_input,
  non_symmetric_input,
  convergence_failure,
  disconnected_graph,
  too_large,
  invalid_node,
  no_candidate_edges,
  empty_report,
  invalid_k,
  invalid_quantile,
  uncentered_omega,
  non_finite_state,
};

// Single exception type for the whole library; `detail` carries the line
// number for parse errors and the component count for disconnected graphs.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, long detail = 0)
      : std::runtime_error(message), code_(code), detail_(detail) {}

  Errc code() const { return code_; }
  long detail() const { return detail_; }

 private:
  Errc code_;
  long detail_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message, long detail = 0) {
  throw Error(code, message, detail);
}

}  // namespace qfern
