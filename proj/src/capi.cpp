#include "fewnomial/fewnomial.h"

#include <cstdlib>
#include <algorithm>
#include <cstring>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "fewnomial/jobs.hpp"
#include "fewnomial/mnomial_solver.hpp"

using namespace fewnomial;

struct fnm_poly {
  Poly p;
};

namespace {

thread_local std::string last_error;

int code_of(ErrorCode c) { return static_cast<int>(c) + 1; }

static_assert(static_cast<int>(ErrorCode::PrecisionExhausted) + 1 == FNM_PRECISION_EXHAUSTED);
static_assert(static_cast<int>(ErrorCode::InvariantViolation) + 1 == FNM_INVARIANT_VIOLATION);

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return FNM_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return FNM_INTERNAL;
  }
}

int null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return FNM_NULL_ARGUMENT;
}

}  // namespace

extern "C" {

int fnm_poly_parse(const char* text, fnm_poly** out) {
  if (text == nullptr || out == nullptr) return null_arg("text/out");
  *out = nullptr;
  return guarded([&] { *out = new fnm_poly{parse_poly(text)}; });
}

void fnm_poly_free(fnm_poly* poly) { delete poly; }

int fnm_poly_degree(const fnm_poly* poly, uint64_t* out) {
  if (poly == nullptr || out == nullptr) return null_arg("poly/out");
  return guarded([&] { *out = poly->p.degree(); });
}

int fnm_poly_terms(const fnm_poly* poly, uint64_t* out) {
  if (poly == nullptr || out == nullptr) return null_arg("poly/out");
  return guarded([&] { *out = poly->p.term_count(); });
}

int fnm_poly_format(const fnm_poly* poly, char** out) {
  if (poly == nullptr || out == nullptr) return null_arg("poly/out");
  return guarded([&] { *out = dup(format_poly(poly->p)); });
}

int fnm_count(const fnm_poly* poly, const char* a, const char* b, int a_open, int b_open, int backend,
              uint64_t* out) {
  if (poly == nullptr || a == nullptr || b == nullptr || out == nullptr) return null_arg("poly/a/b/out");
  return guarded([&] {
    CountQuery q{parse_rational(a), parse_rational(b), a_open != 0, b_open != 0};
    OpCounter ctr;
    *out = solve_closed_count(poly->p, q, ctr, backend == FNM_BACKEND_FLOAT ? Backend::Float : Backend::Exact);
  });
}

int fnm_solve(const fnm_poly* poly, const char* a, const char* b, const char* eps, int backend,
              char** report_json) {
  if (poly == nullptr || a == nullptr || b == nullptr || eps == nullptr || report_json == nullptr) {
    return null_arg("poly/a/b/eps/out");
  }
  *report_json = nullptr;
  return guarded([&] {
    nlohmann::json job{{"command", "solve"},
                       {"poly", format_poly(poly->p)},
                       {"interval", {a, b}},
                       {"eps", eps},
                       {"backend", backend == FNM_BACKEND_FLOAT ? "float" : "exact"}};
    const JobSpec spec = parse_job(job.dump());
    const JobOutcome res = run_job(spec);
    if (res.status != JobStatus::Ok) {
      const auto rec = nlohmann::json::parse(res.report);
      const std::string name = rec.value("error", std::string());
      ErrorCode code = ErrorCode::InvariantViolation;
      for (int c = 0; c <= static_cast<int>(ErrorCode::InvariantViolation); ++c) {
        if (to_string(static_cast<ErrorCode>(c)) == name) code = static_cast<ErrorCode>(c);
      }
      fail(code, rec.value("message", std::string("solve failed")));
    }
    *report_json = dup(res.report);
  });
}

int fnm_run_job(const char* job_json, char** report_json) {
  if (job_json == nullptr || report_json == nullptr) {
    null_arg("job/out");
    return static_cast<int>(JobStatus::BadRequest);
  }
  const JobOutcome res = run_job_json(job_json);
  *report_json = dup(res.report);
  if (res.status == JobStatus::Ok) {
    last_error.clear();
  } else {
    try {
      last_error = nlohmann::json::parse(res.report).value("message", std::string());
    } catch (const std::exception&) {
      last_error = res.report;
    }
  }
  return static_cast<int>(res.status);
}

int fnm_run_batch(const char* jsonl, unsigned threads, char** out_jsonl) {
  if (jsonl == nullptr || out_jsonl == nullptr) return null_arg("jsonl/out");
  *out_jsonl = nullptr;
  return guarded([&] {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::istringstream in(jsonl);
    std::ostringstream out;
    run_batch(in, out, threads);
    *out_jsonl = dup(out.str());
  });
}

void fnm_string_free(char* s) { std::free(s); }

const char* fnm_last_error(void) { return last_error.c_str(); }

const char* fnm_status_name(int status) {
  switch (status) {
    case FNM_OK: return "Ok";
    case FNM_INTERNAL: return "Internal";
    case FNM_NULL_ARGUMENT: return "NullArgument";
    default: break;
  }
  if (status >= 1 && status <= code_of(ErrorCode::InvariantViolation)) {
    static thread_local std::string name;
    name = std::string(to_string(static_cast<ErrorCode>(status - 1)));
    return name.c_str();
  }
  return "Unknown";
}

}  // extern "C"
