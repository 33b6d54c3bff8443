// apsums CLI: sieving, prime sums, model predictions, convergence tables,
// and condition reports as CSV/JSON.
//
// Exit codes: 0 success, 1 computation error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "apsums/apsieve.hpp"
#include "apsums/asymp.hpp"
#include "apsums/conds.hpp"
#include "apsums/errors.hpp"
#include "apsums/exprdsl.hpp"
#include "apsums/quad.hpp"

namespace {

using json = nlohmann::ordered_json;

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// stdout for data, stderr for diagnostics; "-" means stdout.
int emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return 1;
  }
  file.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  return file ? 0 : 1;
}

json trajectory_json(const std::vector<apsums::TrajectoryPoint>& tr) {
  json arr = json::array();
  for (const auto& p : tr) arr.push_back(json::array({p.n, p.value}));
  return arr;
}

struct Options {
  std::string f_text;
  std::string model_name = "pnt";
  std::string format;
  std::string out;
  std::int64_t k = 1;
  std::int64_t l = 0;
  double x = 0.0;
  double x_min = 1e3;
  double x_max = 1e6;
  int x_points = 16;
  double c = apsums::kDefaultC;
  double theta = apsums::kDefaultTheta;
  double tol = apsums::kDefaultTol;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sums of functions over primes in an arithmetic progression"};
  app.require_subcommand(1);

  Options opt;

  const auto add_ap_options = [&](CLI::App* cmd) {
    cmd->add_option("--k", opt.k, "progression modulus k (k >= 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--l", opt.l, "progression residue l, coprime to k");
  };
  const auto add_model_options = [&](CLI::App* cmd) {
    cmd->add_option("--model", opt.model_name, "prediction model")
        ->check(CLI::IsMember({"coarse", "pnt", "vinogradov", "grh"}));
    cmd->add_option("--c", opt.c, "remainder constant c > 0 (default 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--theta", opt.theta, "vinogradov exponent in (0,1), default 0.6")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--tol", opt.tol, "quadrature tolerance (default 1e-10)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* primes = app.add_subcommand("primes", "list progression primes up to x");
  add_ap_options(primes);
  primes->add_option("--x", opt.x, "upper bound")->required()->check(CLI::Range(2.0, 1e18));
  primes->add_option("--out", opt.out, "output path (default stdout)");

  CLI::App* sum = app.add_subcommand("sum", "exact sum of f(p) and the Abel identity");
  add_ap_options(sum);
  sum->add_option("--f", opt.f_text, "weight function of t")->required();
  sum->add_option("--x", opt.x, "upper bound")->required()->check(CLI::Range(2.0, 1e18));
  sum->add_option("--format", opt.format, "csv or json (default json)")
      ->check(CLI::IsMember({"csv", "json"}));
  sum->add_option("--out", opt.out, "output path (default stdout)");

  CLI::App* predict = app.add_subcommand("predict", "model main term and envelope");
  add_ap_options(predict);
  add_model_options(predict);
  predict->add_option("--f", opt.f_text, "weight function of t")->required();
  predict->add_option("--x", opt.x, "upper bound")->required()->check(CLI::Range(2.0, 1e300));
  predict->add_option("--format", opt.format, "csv or json (default json)")
      ->check(CLI::IsMember({"csv", "json"}));
  predict->add_option("--out", opt.out, "output path (default stdout)");

  CLI::App* compare = app.add_subcommand("compare", "exact vs prediction over an x grid");
  add_ap_options(compare);
  add_model_options(compare);
  compare->add_option("--f", opt.f_text, "weight function of t")->required();
  compare->add_option("--x-min", opt.x_min, "grid start (default 1e3)")
      ->check(CLI::Range(2.0, 1e18));
  compare->add_option("--x-max", opt.x_max, "grid end (default 1e6)")
      ->check(CLI::Range(2.0, 1e18));
  compare->add_option("--x-points", opt.x_points, "grid size (default 16)")
      ->check(CLI::Range(1, 100000));
  compare->add_option("--out", opt.out, "output path (default stdout)");

  CLI::App* conditions =
      app.add_subcommand("conditions", "sufficient/necessary condition report (JSON)");
  add_ap_options(conditions);
  conditions->add_option("--f", opt.f_text, "weight function of t")->required();
  conditions->add_option("--out", opt.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  if (const char* cap_env = std::getenv("APSUMS_MAX_X")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(cap_env, &end, 10);
    if (end == cap_env || *end != '\0' || cap < 2) {
      std::cerr << "error: APSUMS_MAX_X must be an integer >= 2\n";
      return 2;
    }
    apsums::set_sieve_cap(cap);
  }

  try {
    apsums::APSpec ap;
    try {
      ap = apsums::make_ap(static_cast<std::uint64_t>(opt.k), opt.l);
    } catch (const apsums::CoprimalityError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }

    if (primes->parsed()) {
      const apsums::PrimeList list = apsums::sieve_range(opt.x, ap);
      std::string payload;
      for (const std::uint64_t p : list.primes) {
        payload += std::to_string(p);
        payload += '\n';
      }
      return emit(opt.out, payload);
    }

    apsums::FuncProfile fp;
    if (sum->parsed() || predict->parsed() || compare->parsed() || conditions->parsed()) {
      const double sample_hi = compare->parsed() ? opt.x_max
                               : conditions->parsed() ? 1e6
                                                      : opt.x;
      try {
        fp = apsums::profile_text(opt.f_text, sample_hi);
      } catch (const apsums::ParseError& e) {
        std::cerr << "error: invalid --f expression: " << e.what() << "\n";
        return 2;
      }
    }

    if (sum->parsed()) {
      const double exact = apsums::exact_sum(fp, opt.x, ap);
      const double abel = apsums::abel_sum(fp, opt.x, ap);
      const double abs_diff = std::fabs(exact - abel);
      std::string payload;
      if (opt.format == "csv") {
        payload = "x,exact,abel,abs_diff\n" + g12(opt.x) + "," + g12(exact) + "," +
                  g12(abel) + "," + g12(abs_diff) + "\n";
      } else {
        json j;
        j["x"] = opt.x;
        j["exact"] = exact;
        j["abel"] = abel;
        j["abs_diff"] = abs_diff;
        payload = j.dump(2) + "\n";
      }
      return emit(opt.out, payload);
    }

    if (predict->parsed()) {
      const apsums::ModelTag model = *apsums::parse_model(opt.model_name);
      const apsums::Prediction p =
          apsums::predict(fp, opt.x, ap, model, opt.c, opt.theta, opt.tol);
      std::string payload;
      if (opt.format == "csv") {
        payload = "main,envelope,model\n" + g12(p.main) + "," + g12(p.envelope) + "," +
                  std::string(apsums::model_name(model)) + "\n";
      } else {
        json j;
        j["main"] = p.main;
        j["envelope"] = p.envelope;
        j["model"] = std::string(apsums::model_name(model));
        payload = j.dump(2) + "\n";
      }
      return emit(opt.out, payload);
    }

    if (compare->parsed()) {
      if (!(opt.x_min < opt.x_max) && opt.x_points > 1) {
        std::cerr << "error: --x-min must be below --x-max\n";
        return 2;
      }
      const apsums::ModelTag model = *apsums::parse_model(opt.model_name);
      const std::vector<double> xs =
          apsums::geometric_grid(opt.x_min, opt.x_max, opt.x_points);
      const std::vector<apsums::ConvergenceRow> rows =
          apsums::convergence_table(fp, ap, xs, model, opt.c, opt.theta, opt.tol);
      std::string payload = "x,exact,main,ratio,normalized_remainder\n";
      for (const auto& r : rows) {
        payload += g12(r.x) + "," + g12(r.exact) + "," + g12(r.main) + "," +
                   g12(r.ratio) + "," + g12(r.normalized_remainder) + "\n";
      }
      return emit(opt.out, payload);
    }

    // conditions
    const apsums::ConditionReport report =
        apsums::run_condition_checks(opt.f_text, fp, ap);
    for (const auto* check_warnings :
         {&report.sufficient.warnings, &report.a33.warnings, &report.necessary.warnings})
      for (const std::string& w : *check_warnings) std::cerr << "warning: " << w << "\n";

    json j;
    j["f"] = report.f_text;
    j["k"] = static_cast<std::int64_t>(report.ap.k);
    j["l"] = static_cast<std::int64_t>(report.ap.l);
    j["sufficient_ratio"] = {
        {"trajectory", trajectory_json(report.sufficient.ratio_trajectory)},
        {"verdict", std::string(verdict_name(report.sufficient.ratio_verdict))}};
    j["divergence"] = {
        {"trajectory", trajectory_json(report.sufficient.integral_trajectory)},
        {"verdict", std::string(verdict_name(report.sufficient.divergence_verdict))}};
    j["a33"] = {{"trajectory", trajectory_json(report.a33.trajectory)},
                {"verdict", std::string(verdict_name(report.a33.verdict))}};
    j["necessary"] = {{"trajectory", trajectory_json(report.necessary.trajectory)},
                      {"verdict", std::string(verdict_name(report.necessary.verdict))}};
    return emit(opt.out, j.dump(2) + "\n");
  } catch (const apsums::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
