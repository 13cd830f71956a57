// Command-line front end: single experiments, preset comparisons, self-checks.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apsa/apsa.hpp"

namespace {

int run_single(const std::string& config_path, const std::string& out_path,
               const std::string& dump_prefix) {
  const apsa::ExperimentConfig cfg = apsa::load_config(config_path);
  if (!dump_prefix.empty()) {
    const apsa::Scenario sc = apsa::synthesize_scenario(cfg);
    apsa::export_scenario(sc, cfg, dump_prefix);
    std::printf("signals written to %s.{x,y,v,d}.f64 + %s.meta\n",
                dump_prefix.c_str(), dump_prefix.c_str());
  }
  const apsa::TraceSet trace = apsa::run_monte_carlo(cfg);
  if (!out_path.empty()) {
    apsa::emit_csv(std::vector<apsa::TraceSet>{trace}, out_path);
    std::printf("trace written to %s\n", out_path.c_str());
  }
  const std::size_t n = trace.misalignment_db.size();
  std::printf("%s: final misalignment %.2f dB over %zu samples\n",
              trace.name.c_str(), trace.misalignment_db[n - 1], n);
  if (trace.diverged_at) {
    std::printf("%s diverged at sample %lld\n", trace.name.c_str(),
                static_cast<long long>(*trace.diverged_at));
    if (cfg.algorithm != apsa::Algorithm::apa_fixed) return 2;
  }
  return 0;
}

int run_compare(int figure, const std::string& out_path) {
  const std::vector<apsa::ExperimentConfig> configs = apsa::figure_preset(figure);
  std::vector<apsa::TraceSet> traces;
  traces.reserve(configs.size());
  bool sign_algorithm_diverged = false;
  for (const apsa::ExperimentConfig& cfg : configs) {
    apsa::TraceSet t = apsa::run_monte_carlo(cfg);
    const std::size_t n = t.misalignment_db.size();
    std::printf("%-18s final %8.2f dB%s\n", t.name.c_str(),
                t.misalignment_db[n - 1],
                t.diverged_at ? "  [diverged]" : "");
    if (t.diverged_at && cfg.algorithm != apsa::Algorithm::apa_fixed) {
      sign_algorithm_diverged = true;
    }
    traces.push_back(std::move(t));
  }
  apsa::emit_csv(traces, out_path);
  std::printf("traces written to %s\n", out_path.c_str());
  return sign_algorithm_diverged ? 2 : 0;
}

bool check(const char* name, bool ok, int& failures) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
  if (!ok) ++failures;
  return ok;
}

int run_selftest() {
  using namespace apsa;
  int failures = 0;

  {  // delay-line shift
    RegressorWindow w(3, 2);
    for (double v : {1.0, 2.0, 3.0, 4.0}) w.push(v);
    check("regressor shift structure",
          w.tap(0, 0) == 4.0 && w.tap(0, 1) == 3.0 && w.tap(0, 2) == 2.0 &&
              w.tap(1, 0) == 3.0 && w.tap(1, 1) == 2.0 && w.tap(1, 2) == 1.0,
          failures);
  }
  {  // a posteriori contraction of the sign update
    SplitMix64 rng(7);
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      const int length = 4, order = 3;
      RegressorWindow w(length, order);
      for (int k = 0; k < 12; ++k) w.push(rng.next_gaussian());
      std::vector<double> coeffs(length), desired(order), steps(order);
      for (auto& c : coeffs) c = rng.next_gaussian();
      for (auto& d : desired) d = rng.next_gaussian();
      for (auto& s : steps) s = 0.05 * rng.next_unit();
      const double reg = 1.0e-10 * length;
      const auto err = error_vector(w, desired, coeffs);
      std::vector<double> signs(order);
      for (int l = 0; l < order; ++l) signs[l] = sign_of(err[l]);
      const double delta = delta_norm(w, signs, reg);
      apsa_update(coeffs, w, err, steps, reg);
      const auto post = error_vector(w, desired, coeffs);
      for (int l = 0; l < order && ok; ++l) {
        double corr = 0.0;
        for (int m = 0; m < order; ++m) {
          corr += w.column_dot(l, m) * steps[m] * signs[m];
        }
        ok = std::abs(post[l] - (err[l] - corr / delta)) < 1.0e-10;
      }
    }
    check("a posteriori error identity", ok, failures);
  }
  {  // quadratic root
    SplitMix64 rng(11);
    bool ok = true;
    for (int trial = 0; trial < 2000 && ok; ++trial) {
      const double a = 0.1 + 5.0 * rng.next_unit();
      const double b = 3.0 * rng.next_unit();
      const double c = (b * b / a) * rng.next_unit();
      const double delta = 0.5 + 2.0 * rng.next_unit();
      const double mu = quadratic_step(a, b, c, delta, 1.0e300);
      const double residual = mu * mu * a / (delta * delta) - 2.0 * mu * b / delta + c;
      ok = std::abs(residual) < 1.0e-10;
    }
    check("energy criterion root residual", ok, failures);
  }
  {  // decay-only rule never increases
    SplitMix64 rng(13);
    ShinState shin{0.97, 0.05};
    bool ok = true;
    double prev = shin.mu_prev;
    for (int k = 0; k < 5000 && ok; ++k) {
      std::vector<double> e(4);
      for (auto& v : e) v = 10.0 * rng.next_gaussian();
      const double mu = shin_step(shin, e, 0.3 + 5.0 * rng.next_unit());
      ok = mu <= prev + 1.0e-15 && mu >= 0.0;
      prev = mu;
    }
    check("decay-only step monotone", ok, failures);
  }
  {  // generators deterministic
    const auto a = gen_ar1(512, 0.8, 99), b = gen_ar1(512, 0.8, 99);
    const auto p = gen_echo_path(64, 5), q = gen_echo_path(64, 5);
    check("seeded generators reproducible", a == b && p == q, failures);
  }
  {  // zero error is a fixpoint
    RegressorWindow w(4, 2);
    for (double v : {1.0, -2.0, 0.5, 3.0}) w.push(v);
    std::vector<double> coeffs{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> before = coeffs;
    const std::vector<double> zero_err(2, 0.0), steps(2, 0.05);
    apsa_update(coeffs, w, zero_err, steps, 1.0e-10);
    check("zero-error fixpoint", coeffs == before, failures);
  }
  {  // small identification run converges
    ExperimentConfig cfg;
    cfg.L = 16;
    cfg.P = 2;
    cfg.n_samples = 4000;
    cfg.snr_db = 60.0;
    cfg.algorithm = Algorithm::proposed_vss;
    cfg.alpha = 0.95;
    cfg.monte_carlo_runs = 1;
    const TraceSet t = run_experiment(cfg);
    check("small run converges below -25 dB",
          t.misalignment_db.back() < -25.0 && !t.diverged_at, failures);
  }

  std::printf(failures == 0 ? "selftest: all checks passed\n"
                            : "selftest: %d check(s) failed\n",
              failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive echo cancellation bench: sign-algorithm filters with "
               "variable step-size control"};
  app.require_subcommand(1);

  std::string config_path, out_path, dump_prefix;
  auto* run_cmd = app.add_subcommand("run", "run one configured experiment");
  run_cmd->add_option("--config", config_path, "experiment config file")->required();
  run_cmd->add_option("--out", out_path, "output CSV path");
  run_cmd->add_option("--dump-signals", dump_prefix,
                      "also write the synthesized signals as raw float64");

  int figure = 1;
  std::string compare_out;
  auto* compare_cmd =
      app.add_subcommand("compare", "run a preset scenario with all algorithms");
  compare_cmd->add_option("--figure", figure, "preset scenario: 1, 2 or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  compare_cmd->add_option("--out", compare_out, "output CSV path")->required();

  auto* selftest_cmd = app.add_subcommand("selftest", "run built-in checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_single(config_path, out_path, dump_prefix);
    if (compare_cmd->parsed()) return run_compare(figure, compare_out);
    if (selftest_cmd->parsed()) return run_selftest();
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
