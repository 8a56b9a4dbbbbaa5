#include "fewnomial/jobs.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include <json.hpp>

#include "fewnomial/mnomial_solver.hpp"
#include "fewnomial/oracle.hpp"

namespace fewnomial {

using json = nlohmann::ordered_json;

JobStatus status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::PrecisionExhausted:
    case ErrorCode::Indeterminate:
      return JobStatus::PrecisionExhausted;
    case ErrorCode::InvariantViolation:
      return JobStatus::Invariant;
    default:
      return JobStatus::BadRequest;
  }
}

int default_digits(const mpq_class& eps) {
  if (sgn(eps) <= 0) fail(ErrorCode::InvalidRequest, "eps must be positive");
  // smallest k with 10^-k <= eps
  long k = static_cast<long>(std::floor(-log2_of(eps) / std::log2(10.0))) - 2;
  for (;;) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(k)));
    const mpq_class tenk = k >= 0 ? mpq_class(mpz_class(1), p) : mpq_class(p);
    if (tenk <= eps) break;
    ++k;
  }
  return static_cast<int>(std::max(0L, k) + 2);
}

// ------------------------------------------------------------------ parsing

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ParseError, what); }

mpq_class number(const json& v, const char* key) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return parse_rational(v.dump());
  bad(std::string(key) + ": expected a number or numeric string");
}

std::uint64_t uint_field(const json& v, const char* key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  bad(std::string(key) + ": expected a non-negative integer");
}

bool bool_field(const json& v, const char* key) {
  if (!v.is_boolean()) bad(std::string(key) + ": expected true or false");
  return v.get<bool>();
}

std::string string_field(const json& v, const char* key) {
  if (!v.is_string()) bad(std::string(key) + ": expected a string");
  return v.get<std::string>();
}

void parse_backend(const std::string& text, JobSpec& job) {
  job.backend_given = true;
  if (text == "exact") {
    job.backend = Backend::Exact;
    return;
  }
  if (text.rfind("float", 0) == 0) {
    job.backend = Backend::Float;
    if (text.size() == 5) return;
    if (text[5] != ':') bad("backend: expected exact, float or float:<bits>");
    const std::string bits = text.substr(6);
    if (bits.empty() || !std::all_of(bits.begin(), bits.end(), ::isdigit) || bits.size() > 7) {
      bad("backend: bad bit count '" + bits + "'");
    }
    const unsigned long b = std::stoul(bits);
    if (b < 16 || b > FloatContext::kDefaultCapBits) bad("backend: bits must be in [16, 8192]");
    job.float_bits = static_cast<unsigned>(b);
    return;
  }
  bad("backend: expected exact, float or float:<bits>");
}

std::vector<std::uint64_t> degree_list(const json& v) {
  std::vector<std::uint64_t> out;
  if (v.is_array()) {
    for (const auto& d : v) out.push_back(uint_field(d, "degrees"));
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t comma = s.find(',', pos);
      if (comma == std::string::npos) comma = s.size();
      const std::string item = s.substr(pos, comma - pos);
      if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit) || item.size() > 19) {
        bad("degrees: bad entry '" + item + "'");
      }
      out.push_back(std::stoull(item));
      pos = comma + 1;
    }
  } else {
    bad("degrees: expected a list or a comma-separated string");
  }
  return out;
}

}  // namespace

JobSpec parse_job(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) bad("a job must be a JSON object");
  JobSpec job;
  std::optional<bool> open, open_left, open_right;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "command") {
      job.command = string_field(v, "command");
    } else if (k == "poly") {
      job.poly = string_field(v, "poly");
    } else if (k == "interval") {
      job.has_interval = true;
      if (v.is_array()) {
        if (v.size() != 2) bad("interval: expected two endpoints");
        job.interval.a = number(v[0], "interval");
        job.interval.b = number(v[1], "interval");
      } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto comma = s.find(',');
        if (comma == std::string::npos) bad("interval: expected 'a,b'");
        job.interval.a = parse_rational(s.substr(0, comma));
        job.interval.b = parse_rational(s.substr(comma + 1));
      } else {
        bad("interval: expected [a, b] or 'a,b'");
      }
    } else if (k == "open") {
      open = bool_field(v, "open");
    } else if (k == "open_left") {
      open_left = bool_field(v, "open_left");
    } else if (k == "open_right") {
      open_right = bool_field(v, "open_right");
    } else if (k == "eps") {
      job.eps = number(v, "eps");
    } else if (k == "backend") {
      parse_backend(string_field(v, "backend"), job);
    } else if (k == "alpha") {
      job.alpha = number(v, "alpha");
    } else if (k == "strict_alpha") {
      job.strict_alpha = bool_field(v, "strict_alpha");
    } else if (k == "digits") {
      const std::uint64_t d = uint_field(v, "digits");
      if (d > 10000) bad("digits: at most 10000");
      job.digits = static_cast<int>(d);
    } else if (k == "stats") {
      job.stats = bool_field(v, "stats");
    } else if (k == "timing") {
      job.timing = bool_field(v, "timing");
    } else if (k == "degrees") {
      job.degrees = degree_list(v);
    } else if (k == "m") {
      job.m = uint_field(v, "m");
    } else if (k == "trials") {
      job.trials = uint_field(v, "trials");
    } else if (k == "seed") {
      job.seed = uint_field(v, "seed");
    } else if (k == "R") {
      job.R = number(v, "R");
    } else if (k == "mode") {
      job.mode = string_field(v, "mode");
    } else if (k == "cases") {
      job.cases = uint_field(v, "cases");
    } else if (k == "max_degree") {
      job.max_degree = uint_field(v, "max_degree");
    } else if (k == "dmin") {
      job.dmin = uint_field(v, "dmin");
    } else if (k == "dmax") {
      job.dmax = uint_field(v, "dmax");
    } else {
      bad("unknown key '" + k + "'");
    }
  }
  if (open) job.interval.a_open = job.interval.b_open = *open;
  if (open_left) job.interval.a_open = *open_left;
  if (open_right) job.interval.b_open = *open_right;

  static const std::set<std::string> commands{"count", "solve", "bench", "verify", "blowup"};
  if (!commands.count(job.command)) bad("command: expected count, solve, bench, verify or blowup");
  if (job.command == "count" || job.command == "solve") {
    if (job.poly.empty()) bad(job.command + " needs poly");
    if (!job.has_interval) bad(job.command + " needs interval");
    if (job.interval.a > job.interval.b) bad("interval: a > b");
  }
  if (job.command == "solve") {
    if (!job.eps) bad("solve needs eps");
    if (*job.eps <= 0 || *job.eps >= job.interval.b - job.interval.a) {
      bad("eps must satisfy 0 < eps < interval width");
    }
  }
  if (job.command == "bench") {
    if (job.degrees.empty()) bad("bench needs degrees");
    if (job.mode != "solve" && job.mode != "count") bad("mode: expected solve or count");
    if (job.m < 2) bad("m: at least 2");
    if (job.trials == 0) bad("trials: at least 1");
    if (job.R <= 0) bad("R: must be positive");
    if (!job.eps) job.eps = mpq_class(1, 1000000000);
    if (*job.eps <= 0 || *job.eps >= job.R) bad("eps must satisfy 0 < eps < R");
    if (!job.backend_given) job.backend = Backend::Float;
    for (std::uint64_t D : job.degrees) {
      if (D < job.m) bad("degrees: every D must be at least m");
    }
  }
  if (job.command == "blowup" && (job.dmin < 3 || job.dmin > job.dmax || job.dmax > 200)) {
    bad("blowup needs 3 <= dmin <= dmax <= 200");
  }
  if (job.command == "verify" && (job.max_degree < 2 || job.max_degree > 4096)) {
    bad("max_degree: expected 2..4096");
  }
  return job;
}

std::string job_to_json(const JobSpec& job) {
  json j;
  j["command"] = job.command;
  if (!job.poly.empty()) j["poly"] = job.poly;
  if (job.has_interval) {
    j["interval"] = {job.interval.a.get_str(), job.interval.b.get_str()};
    j["open_left"] = job.interval.a_open;
    j["open_right"] = job.interval.b_open;
  }
  if (job.eps) j["eps"] = job.eps->get_str();
  j["backend"] = job.backend == Backend::Exact
                     ? std::string("exact")
                     : job.float_bits ? "float:" + std::to_string(job.float_bits) : std::string("float");
  if (job.alpha) j["alpha"] = job.alpha->get_str();
  if (job.strict_alpha) j["strict_alpha"] = true;
  if (job.digits >= 0) j["digits"] = job.digits;
  if (job.stats) j["stats"] = true;
  if (job.timing) j["timing"] = true;
  if (job.command == "bench") {
    j["degrees"] = job.degrees;
    j["m"] = job.m;
    j["trials"] = job.trials;
    j["seed"] = job.seed;
    j["R"] = job.R.get_str();
    j["mode"] = job.mode;
  } else if (job.command == "verify") {
    j["cases"] = job.cases;
    j["seed"] = job.seed;
    j["max_degree"] = job.max_degree;
  } else if (job.command == "blowup") {
    j["dmin"] = job.dmin;
    j["dmax"] = job.dmax;
  }
  return j.dump();
}

// ---------------------------------------------------------------- commands

namespace {

json ops_json(const OpCounter& c) {
  return json{{"mul", c.mul}, {"div", c.div}, {"add", c.add}, {"cmp", c.cmp}, {"total", c.total()},
              {"evals", c.evals}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Poly random_mnomial(std::mt19937_64& rng, std::uint64_t m, std::uint64_t D) {
  if (m == 3) return random_trinomial(rng, D);
  auto coeff = [&]() {
    long c = static_cast<long>(rng() % 20) - 10;
    return c >= 0 ? c + 1 : c;
  };
  std::set<std::uint64_t> exps{0, D};
  while (exps.size() < m) exps.insert(1 + rng() % (D - 1));
  std::vector<Term<Rational>> t;
  for (std::uint64_t e : exps) t.push_back({Rational(coeff()), e});
  return Poly::from_canonical(std::move(t));
}

mpq_class random_endpoint(std::mt19937_64& rng) {
  mpq_class q(static_cast<long>(rng() % 4001) - 2000, 1000);
  q.canonicalize();
  return q;
}

SolveRequest solve_request(const JobSpec& job, Poly f) {
  SolveRequest req;
  req.f = std::move(f);
  req.eps = *job.eps;
  req.alpha_star = job.alpha;
  req.backend = job.backend;
  req.strict_alpha = job.strict_alpha;
  return req;
}

json run_count(const JobSpec& job) {
  const Poly f = parse_poly(job.poly);
  const auto t0 = std::chrono::steady_clock::now();
  OpCounter ctr;
  const std::uint64_t n = solve_closed_count(f, job.interval, ctr, job.backend);
  json r{{"count", n}};
  if (job.stats) r["ops"] = ops_json(ctr);
  if (job.timing) r["wall_time"] = seconds_since(t0);
  return r;
}

json run_solve(const JobSpec& job) {
  const Poly f = parse_poly(job.poly);
  const auto t0 = std::chrono::steady_clock::now();
  OpCounter ctr;
  const RootReport rep = solve_interval(solve_request(job, f), job.interval, ctr);
  const ResidualCheck rc = residual_check(f, job.interval, *job.eps, rep);
  if (!rc.ok) fail(ErrorCode::InvariantViolation, "residual check failed: " + rc.message);
  const int digits = job.digits >= 0 ? job.digits : default_digits(*job.eps);

  json roots = json::array();
  for (const RootEntry& e : rep.roots) {
    roots.push_back({{"value", to_decimal(e.z, digits)}, {"provenance", to_string(e.provenance)}});
  }
  json r;
  r["count"] = rep.roots.size();
  r["roots"] = std::move(roots);
  if (rep.all_reals) r["all_reals"] = true;
  r["digits"] = digits;
  r["alpha"] = rep.alpha.get_str();
  r["alpha_verified"] = rep.alpha_verified;
  r["residual_check"] = {{"ok", rc.ok}, {"checked", rc.checked}, {"expected", rc.expected}};
  if (job.stats) {
    r["ops"] = ops_json(ctr);
    r["hybrid_calls"] = rep.hybrid_calls;
    r["hybrid_fallbacks"] = rep.hybrid_fallbacks;
    r["max_depth"] = rep.max_depth;
  }
  if (job.timing) r["wall_time"] = seconds_since(t0);
  return r;
}

std::uint64_t chain_K(const Poly& f) {
  const Poly g = op_S(f);
  if (g.term_count() != 3) return 0;
  return with_escalation([&] {
    OpCounter scratch;
    return static_cast<std::uint64_t>(
        detail::build_chain(convert<AdaptiveFloat>(g), scratch).K());
  });
}

json run_bench(const JobSpec& job) {
  std::mt19937_64 rng(job.seed);
  const double log_r_eps = log2_of(job.R / *job.eps);
  const bool solving = job.mode == "solve";
  json rows = json::array();
  json per_degree = json::array();
  double c_fit = 0, mean_lo = 0, mean_hi = 0;
  for (std::uint64_t D : job.degrees) {
    const double lg = std::log2(static_cast<double>(D));
    const double clg = static_cast<double>(ceil_log2(D));
    const double model = solving ? lg * std::log2(static_cast<double>(D) * log_r_eps) : clg * clg;
    double sum = 0;
    for (std::uint64_t t = 0; t < job.trials; ++t) {
      const Poly f = random_mnomial(rng, job.m, D);
      const auto t0 = std::chrono::steady_clock::now();
      OpCounter ctr;
      if (solving) {
        SolveRequest req = solve_request(job, f);
        req.R = job.R;
        solve(req, ctr);
      } else {
        mpq_class a = random_endpoint(rng), b = random_endpoint(rng);
        if (a > b) std::swap(a, b);
        const bool ao = (rng() & 1) != 0, bo = (rng() & 2) != 0;
        solve_closed_count(f, CountQuery{a, b, ao, bo}, ctr, job.backend);
      }
      const double wall = seconds_since(t0);
      const double ratio = static_cast<double>(ctr.total()) / model;
      sum += ratio;
      c_fit = std::max(c_fit, ratio);
      json row{{"D", D},
               {"m", job.m},
               {"eps", job.eps->get_str()},
               {"charged_ops", ctr.total()},
               {"charged_evals", ctr.evals},
               {"chain_K", chain_K(f)},
               {"ratio", ratio}};
      if (job.timing) row["wall_time"] = wall;
      rows.push_back(std::move(row));
    }
    const double mean = sum / static_cast<double>(job.trials);
    per_degree.push_back({{"D", D}, {"mean_ratio", mean}});
    mean_lo = per_degree.size() == 1 ? mean : std::min(mean_lo, mean);
    mean_hi = std::max(mean_hi, mean);
  }
  json r;
  r["mode"] = job.mode;
  r["model"] = solving ? "ops/(log2 D * log2(D * log2(R/eps)))" : "ops/ceil(log2 D)^2";
  r["R"] = job.R.get_str();
  r["seed"] = job.seed;
  r["trials"] = job.trials;
  r["rows"] = std::move(rows);
  r["per_degree"] = std::move(per_degree);
  r["C"] = c_fit;
  r["ratio_max_over_min"] = mean_lo > 0 ? mean_hi / mean_lo : 0.0;
  return r;
}

json run_verify(const JobSpec& job) {
  std::mt19937_64 rng(job.seed);
  std::uint64_t count_pass = 0, solve_pass = 0;
  json failures = json::array();
  const mpq_class eps(1, 1000000000);
  const mpq_class width = mpq_class(1, 1) / (mpz_class(1) << 80);
  static const long radii[] = {1, 2, 10};
  for (std::uint64_t i = 0; i < job.cases; ++i) {
    const std::uint64_t D = 2 + rng() % (job.max_degree - 1);
    const Poly f = random_trinomial(rng, D);
    mpq_class a = random_endpoint(rng), b = random_endpoint(rng);
    if (a > b) std::swap(a, b);
    const CountQuery q{a, b, (rng() & 1) != 0, (rng() & 2) != 0};
    const DensePoly p = expand(f);
    OpCounter scratch;
    if (solve_closed_count(f, q, scratch) == dense_sturm_count(p, q)) {
      ++count_pass;
    } else if (failures.size() < 10) {
      failures.push_back({{"kind", "count"}, {"poly", format_poly(f)}, {"interval", q.str()}});
    }
    SolveRequest req;
    req.f = f;
    req.eps = eps;
    req.backend = job.backend;
    req.R = radii[rng() % 3];
    const RootReport rep = solve(req);
    const auto brackets = isolate_and_refine(p, CountQuery::closed(0, req.R), width).brackets();
    if (bijective_eps_matching(rep.values(), brackets, eps)) {
      ++solve_pass;
    } else if (failures.size() < 10) {
      failures.push_back({{"kind", "solve"}, {"poly", format_poly(f)}, {"R", req.R.get_str()}});
    }
  }
  json r;
  r["cases"] = job.cases;
  r["seed"] = job.seed;
  r["count_pass"] = count_pass;
  r["count_fail"] = job.cases - count_pass;
  r["solve_pass"] = solve_pass;
  r["solve_fail"] = job.cases - solve_pass;
  r["failures"] = std::move(failures);
  return r;
}

json run_blowup(const JobSpec& job) {
  json rows = json::array();
  for (std::uint64_t D = job.dmin; D <= job.dmax; ++D) {
    const BlowupRow b = tetranomial_blowup(D);
    rows.push_back({{"D", b.D},
                    {"p3_degree", b.p3_degree},
                    {"p3_terms", b.p3_terms},
                    {"p2_matches", b.p2_matches},
                    {"chain_length", b.chain_length}});
  }
  return json{{"rows", std::move(rows)}};
}

std::string error_record(JobStatus status, std::string_view code, const std::string& message,
                         std::optional<std::uint64_t> line) {
  json r;
  if (line) r["line"] = *line;
  r["status"] = static_cast<int>(status);
  r["error"] = code;
  r["message"] = message;
  return r.dump();
}

JobOutcome run_guarded(const std::string& text, std::optional<std::uint64_t> line) {
  try {
    const JobSpec job = parse_job(text);
    FloatContext::set_start_bits(job.float_bits);
    struct Reset {
      ~Reset() { FloatContext::set_start_bits(0); }
    } reset;
    json r;
    if (job.command == "count") {
      r = run_count(job);
    } else if (job.command == "solve") {
      r = run_solve(job);
    } else if (job.command == "bench") {
      r = run_bench(job);
    } else if (job.command == "verify") {
      r = run_verify(job);
    } else {
      r = run_blowup(job);
    }
    JobStatus status = JobStatus::Ok;
    if (job.command == "verify" && (r["count_fail"] != 0 || r["solve_fail"] != 0)) {
      status = JobStatus::Invariant;
    }
    if (line && status != JobStatus::Ok) r["line"] = *line;
    return {status, r.dump()};
  } catch (const Error& e) {
    const JobStatus s = status_for(e.code());
    return {s, error_record(s, to_string(e.code()), e.what(), line)};
  } catch (const std::exception& e) {
    return {JobStatus::Invariant, error_record(JobStatus::Invariant, "InternalError", e.what(), line)};
  }
}

}  // namespace

JobOutcome run_job(const JobSpec& job) { return run_guarded(job_to_json(job), std::nullopt); }

JobOutcome run_job_json(const std::string& json_text) { return run_guarded(json_text, std::nullopt); }

void run_batch(std::istream& in, std::ostream& out, unsigned threads) {
  std::vector<std::pair<std::uint64_t, std::string>> lines;
  std::string text;
  for (std::uint64_t n = 1; std::getline(in, text); ++n) {
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    lines.emplace_back(n, std::move(text));
  }
  std::vector<std::string> reports(lines.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < lines.size(); i = next++) {
      reports[i] = run_guarded(lines[i].second, lines[i].first).report;
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lines.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& r : reports) out << r << '\n';
}

}  // namespace fewnomial
