#pragma once

#include <stdexcept>
#include <string>

namespace pathgroup {

// Exit codes used by the CLI; library code throws the matching exceptions.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  bad_args = 2,
  cut_locus = 3,
  out_of_chart = 4,
  inconclusive = 5,
};

struct Error : std::runtime_error {
  ExitCode code;
  Error(ExitCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

struct BadArgsError : Error {
  explicit BadArgsError(const std::string& what) : Error(ExitCode::bad_args, what) {}
};

// Endpoint on the cut locus: no isolated geodesics.
struct CutLocusError : Error {
  explicit CutLocusError(const std::string& what) : Error(ExitCode::cut_locus, what) {}
};

// Chart fixed point left its contraction region.
struct OutOfChartError : Error {
  explicit OutOfChartError(const std::string& what) : Error(ExitCode::out_of_chart, what) {}
};

// A bounded exhaustive search hit its node cap; never a silent false.
struct InconclusiveError : Error {
  explicit InconclusiveError(const std::string& what) : Error(ExitCode::inconclusive, what) {}
};

}  // namespace pathgroup
