#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "apsa/config.hpp"

TEST_CASE("config text round-trips through the parser") {
  apsa::ExperimentConfig cfg;
  cfg.L = 64;
  cfg.P = 4;
  cfg.n_samples = 12345;
  cfg.pole = 0.75;
  cfg.snr_db = 25.0;
  cfg.sir_db = -3.0;
  cfg.bernoulli_p = 0.2;
  cfg.path_change_at = 6000;
  cfg.algorithm = apsa::Algorithm::shao_oracle_vss;
  cfg.mu = 0.02;
  cfg.alpha = 0.995;
  cfg.mu_max = 0.04;
  cfg.mu_init = 0.03;
  cfg.seed_path = 11;
  cfg.seed_far_end = 22;
  cfg.seed_noise = 33;
  cfg.seed_impulse = 44;
  cfg.seed_path2 = 55;
  cfg.monte_carlo_runs = 3;

  std::istringstream in(apsa::serialize_config(cfg));
  const auto parsed = apsa::parse_config_text(in);
  CHECK(parsed.L == cfg.L);
  CHECK(parsed.P == cfg.P);
  CHECK(parsed.n_samples == cfg.n_samples);
  CHECK(parsed.pole == cfg.pole);
  CHECK(parsed.snr_db == cfg.snr_db);
  REQUIRE(parsed.sir_db.has_value());
  CHECK(*parsed.sir_db == *cfg.sir_db);
  CHECK(parsed.bernoulli_p == cfg.bernoulli_p);
  REQUIRE(parsed.path_change_at.has_value());
  CHECK(*parsed.path_change_at == *cfg.path_change_at);
  CHECK(parsed.algorithm == cfg.algorithm);
  CHECK(parsed.mu == cfg.mu);
  CHECK(parsed.alpha == cfg.alpha);
  CHECK(parsed.mu_max == cfg.mu_max);
  CHECK(parsed.mu_init == cfg.mu_init);
  CHECK(parsed.seed_path == cfg.seed_path);
  CHECK(parsed.seed_far_end == cfg.seed_far_end);
  CHECK(parsed.seed_noise == cfg.seed_noise);
  CHECK(parsed.seed_impulse == cfg.seed_impulse);
  CHECK(parsed.seed_path2 == cfg.seed_path2);
  CHECK(parsed.monte_carlo_runs == cfg.monte_carlo_runs);
}

TEST_CASE("optional fields stay absent when not mentioned") {
  std::istringstream in("L = 32\nP = 2\nn_samples = 100\n");
  const auto cfg = apsa::parse_config_text(in);
  CHECK_FALSE(cfg.sir_db.has_value());
  CHECK_FALSE(cfg.path_change_at.has_value());
}

TEST_CASE("comments and blank lines are ignored") {
  std::istringstream in(
      "# scenario\n"
      "\n"
      "L = 32   # taps\n"
      "algorithm = shin_vss\n");
  const auto cfg = apsa::parse_config_text(in);
  CHECK(cfg.L == 32);
  CHECK(cfg.algorithm == apsa::Algorithm::shin_vss);
}

TEST_CASE("unknown keys are rejected") {
  std::istringstream in("L = 32\nstep_size = 0.1\n");
  CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
}

TEST_CASE("malformed lines and values are rejected") {
  {
    std::istringstream in("L 32\n");
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
  {
    std::istringstream in("L = twelve\n");
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
  {
    std::istringstream in("algorithm = gradient_descent\n");
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
}

TEST_CASE("validation rejects inconsistent setups") {
  {
    std::istringstream in("L = 2\nP = 5\n");  // P > L
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
  {
    std::istringstream in("pole = 1.0\n");
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
  {
    std::istringstream in("bernoulli_p = 1.5\n");
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
  {
    std::istringstream in("monte_carlo_runs = 0\n");
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
  {
    std::istringstream in("alpha = 1.0\n");
    CHECK_THROWS_AS(apsa::parse_config_text(in), std::invalid_argument);
  }
}
