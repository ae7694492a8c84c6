#pragma once

#include <stdexcept>
#include <string>

namespace splitsched {

// Error classes surfaced by the library. The CLI maps these onto exit codes.
enum class Errc {
  unknown_backend,
  length_mismatch,
  split_same_backend,
  split_order_violation,
  ratio_out_of_range,
  zero_reference,
  empty_benchmark_set,
  missing_score,
  empty_segments,
  budget_exceeded,
  empty_trajectory,
  tail_out_of_range,
  zero_makespan,
  space_too_large,
  empty_options,
  parse_error,
  invalid_field,
  empty_backends,
  empty_jobs,
  invalid_argument,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unknown_backend: return "UnknownBackend";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::split_same_backend: return "SplitSameBackend";
    case Errc::split_order_violation: return "SplitOrderViolation";
    case Errc::ratio_out_of_range: return "RatioOutOfRange";
    case Errc::zero_reference: return "ZeroReference";
    case Errc::empty_benchmark_set: return "EmptyBenchmarkSet";
    case Errc::missing_score: return "MissingScore";
    case Errc::empty_segments: return "EmptySegments";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::empty_trajectory: return "EmptyTrajectory";
    case Errc::tail_out_of_range: return "TailOutOfRange";
    case Errc::zero_makespan: return "ZeroMakespan";
    case Errc::space_too_large: return "SpaceTooLarge";
    case Errc::empty_options: return "EmptyOptions";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_field: return "InvalidField";
    case Errc::empty_backends: return "EmptyBackends";
    case Errc::empty_jobs: return "EmptyJobs";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace splitsched
