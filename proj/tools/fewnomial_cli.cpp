#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fewnomial/fewnomial.h"

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string poly, interval, eps, backend, alpha, degrees, mode, R, input;
  bool open = false, open_left = false, open_right = false;
  bool strict_alpha = false, stats = false, timing = false;
  std::optional<unsigned> digits;
  std::optional<std::uint64_t> m, trials, seed, cases, max_degree, dmin, dmax;
  unsigned threads = 0;
};

void put(json& j, const char* key, const std::string& v) {
  if (!v.empty()) j[key] = v;
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

json build_job(const std::string& command, const Options& o) {
  json j;
  j["command"] = command;
  put(j, "poly", o.poly);
  put(j, "interval", o.interval);
  if (o.open) j["open"] = true;
  if (o.open_left) j["open_left"] = true;
  if (o.open_right) j["open_right"] = true;
  put(j, "eps", o.eps);
  put(j, "backend", o.backend);
  put(j, "alpha", o.alpha);
  if (o.strict_alpha) j["strict_alpha"] = true;
  put(j, "digits", o.digits);
  if (o.stats) j["stats"] = true;
  if (o.timing) j["timing"] = true;
  put(j, "degrees", o.degrees);
  put(j, "m", o.m);
  put(j, "trials", o.trials);
  put(j, "seed", o.seed);
  put(j, "R", o.R);
  put(j, "mode", o.mode);
  put(j, "cases", o.cases);
  put(j, "max_degree", o.max_degree);
  put(j, "dmin", o.dmin);
  put(j, "dmax", o.dmax);
  return j;
}

int run_one(const json& job) {
  char* report = nullptr;
  const int status = fnm_run_job(job.dump().c_str(), &report);
  if (report != nullptr) std::cout << report << '\n';
  fnm_string_free(report);
  if (status != 0) std::cerr << "error: " << fnm_last_error() << '\n';
  return status;
}

int run_batch_file(const Options& o) {
  std::stringstream text;
  if (o.input == "-") {
    text << std::cin.rdbuf();
  } else {
    std::ifstream in(o.input);
    if (!in) {
      std::cerr << "error: cannot read " << o.input << '\n';
      return 2;
    }
    text << in.rdbuf();
  }
  char* out = nullptr;
  const int rc = fnm_run_batch(text.str().c_str(), o.threads, &out);
  if (rc != 0) {
    std::cerr << "error: " << fnm_last_error() << '\n';
    return 4;
  }
  std::cout << out;
  fnm_string_free(out);
  return 0;
}

void add_poly_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--poly", o.poly, "terms c,e;c,e;... (c rational, e exponent)")->required();
  cmd->add_option("--interval", o.interval, "endpoints a,b (use --interval=-1,2 for a negative a)")->required();
  cmd->add_flag("--open", o.open, "open at both ends");
  cmd->add_flag("--open-left", o.open_left, "open at a");
  cmd->add_flag("--open-right", o.open_right, "open at b");
  cmd->add_option("--backend", o.backend, "exact, float or float:<bits>");
  cmd->add_flag("--stats", o.stats, "include charged operation counts");
  cmd->add_flag("--timing", o.timing, "include wall time (breaks byte-identical reports)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real roots of sparse univariate polynomials"};
  app.require_subcommand(1);
  Options o;

  auto* count = app.add_subcommand("count", "number of distinct real roots in an interval");
  add_poly_options(count, o);

  auto* solve = app.add_subcommand("solve", "eps-approximations of every root in an interval");
  add_poly_options(solve, o);
  solve->add_option("--eps", o.eps, "accuracy, e.g. 1e-9 or 1/1000")->required();
  solve->add_option("--alpha", o.alpha, "alpha bound override");
  solve->add_flag("--strict-alpha", o.strict_alpha, "refuse levels without a proven alpha bound");
  solve->add_option("--digits", o.digits, "decimal digits (default ceil(-log10 eps) + 2)");

  auto* bench = app.add_subcommand("bench", "charged-operation scaling over random m-nomials");
  bench->add_option("--degrees", o.degrees, "comma-separated degrees")->required();
  bench->add_option("--m", o.m, "terms per polynomial (default 3)");
  bench->add_option("--trials", o.trials, "polynomials per degree (default 20)");
  bench->add_option("--seed", o.seed, "random seed (default 7)");
  bench->add_option("--eps", o.eps, "accuracy (default 1e-9)");
  bench->add_option("--R", o.R, "right end of [0, R] (default 2)");
  bench->add_option("--mode", o.mode, "solve or count (default solve)");
  bench->add_option("--backend", o.backend, "exact, float or float:<bits> (default float)");
  bench->add_option("--alpha", o.alpha, "alpha bound override");
  bench->add_flag("--timing", o.timing, "include per-row wall time");

  auto* verify = app.add_subcommand("verify", "random trinomials checked against the dense oracle");
  verify->add_option("--cases", o.cases, "number of cases (default 200)");
  verify->add_option("--seed", o.seed, "random seed (default 7)");
  verify->add_option("--max-degree", o.max_degree, "largest degree (default 512)");
  verify->add_option("--backend", o.backend, "exact, float or float:<bits>");

  auto* blowup = app.add_subcommand("blowup", "dense Sturm sequence of x^2D + x^(D+1) + x^D + 1");
  blowup->add_option("--dmin", o.dmin, "smallest D (default 3)");
  blowup->add_option("--dmax", o.dmax, "largest D (default 20)");

  auto* batch = app.add_subcommand("batch", "run a JSON-lines file of jobs");
  batch->add_option("input", o.input, "file of JSON jobs, one per line, or - for stdin")->required();
  batch->add_option("--threads", o.threads, "worker threads (default: hardware threads)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (batch->parsed()) return run_batch_file(o);
  for (auto* cmd : {count, solve, bench, verify, blowup}) {
    if (cmd->parsed()) return run_one(build_job(cmd->get_name(), o));
  }
  return 2;
}
