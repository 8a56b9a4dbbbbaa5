#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fewnomial/errors.hpp"
#include "fewnomial/interval.hpp"
#include "fewnomial/trinomial_sturm.hpp"

namespace fewnomial {

// Process exit statuses shared by the CLI and the C API.
enum class JobStatus : int {
  Ok = 0,
  BadRequest = 2,
  PrecisionExhausted = 3,
  Invariant = 4,
};

JobStatus status_for(ErrorCode code);

struct JobSpec {
  std::string command;  // count, solve, bench, verify, blowup
  std::string poly;
  CountQuery interval;
  bool has_interval = false;
  std::optional<mpq_class> eps;
  Backend backend = Backend::Exact;
  unsigned float_bits = 0;  // 0: FEWNOMIAL_FLOAT_BITS or the built-in default
  bool backend_given = false;
  std::optional<mpq_class> alpha;
  bool strict_alpha = false;
  int digits = -1;  // -1: ceil(-log10 eps) + 2
  bool stats = false;
  bool timing = false;
  // bench
  std::vector<std::uint64_t> degrees;
  std::uint64_t m = 3;
  std::uint64_t trials = 20;
  std::uint64_t seed = 7;
  mpq_class R = 2;
  std::string mode = "solve";  // or count
  // verify
  std::uint64_t cases = 200;
  std::uint64_t max_degree = 512;
  // blowup
  std::uint64_t dmin = 3;
  std::uint64_t dmax = 20;
};

// Throws Error(ParseError) on malformed JSON, unknown keys or bad values.
JobSpec parse_job(const std::string& json_text);
std::string job_to_json(const JobSpec& job);

struct JobOutcome {
  JobStatus status = JobStatus::Ok;
  std::string report;  // one JSON object, no trailing newline
};

// Never throws: failures come back as an error record with their status.
JobOutcome run_job(const JobSpec& job);
JobOutcome run_job_json(const std::string& json_text);

// ceil(-log10 eps) + 2
int default_digits(const mpq_class& eps);

// One output line per non-blank input line, in input order.  Malformed
// lines and failed jobs produce an error record carrying the line number.
void run_batch(std::istream& in, std::ostream& out, unsigned threads);

}  // namespace fewnomial
