#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dandelion/core_model.hpp"
#include "oracles.hpp"

using namespace dandelion;
using dandelion::testing::brute_force;
using dandelion::testing::closed_form_long;
using dandelion::testing::ConfigGenerator;

TEST_CASE("rho_bounds") {
  SUBCASE("p = 0.4 gives (-2/3, 1)") {
    const RhoInterval iv = rho_bounds(0.4);
    CHECK(iv.lower == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(iv.upper == 1.0);
  }
  SUBCASE("p = 0.5 gives (-1, 1)") {
    CHECK(rho_bounds(0.5).lower == -1.0);
  }
  SUBCASE("p = 0.2 gives (-0.25, 1)") {
    CHECK(rho_bounds(0.2).lower == doctest::Approx(-0.25).epsilon(1e-15));
  }
  SUBCASE("symmetric under p -> 1 - p") {
    for (double p = 0.01; p < 0.995; p += 0.01) {
      CHECK(std::abs(rho_bounds(p).lower - rho_bounds(1.0 - p).lower) < 1e-12);
      CHECK(rho_bounds(p).lower >= -1.0);
      CHECK(rho_bounds(p).lower < 0.0);
    }
  }
  SUBCASE("p outside (0, 1) is a domain error") {
    CHECK_THROWS_AS(rho_bounds(0.0), std::domain_error);
    CHECK_THROWS_AS(rho_bounds(1.0), std::domain_error);
    CHECK_THROWS_AS(rho_bounds(-0.1), std::domain_error);
    CHECK_THROWS_AS(rho_bounds(std::nan("")), std::domain_error);
  }
}

TEST_CASE("rho_to_q and q_to_rho") {
  CHECK(rho_to_q(0.4, 0.0) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(rho_to_q(0.4, -0.5) == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(rho_to_q(0.4, 0.26) == doctest::Approx(0.2224).epsilon(1e-15));

  CHECK(std::abs(q_to_rho(0.4, 0.16)) < 1e-15);
  CHECK(q_to_rho(0.4, 0.04) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(std::abs(q_to_rho(0.5, 0.25)) < 1e-15);

  SUBCASE("round trip") {
    ConfigGenerator gen(11);
    for (int i = 0; i < 1000; ++i) {
      const ModelConfig cfg = gen.next(10);
      CHECK(std::abs(q_to_rho(cfg.p, rho_to_q(cfg.p, cfg.rho)) - cfg.rho) < 1e-12);
    }
  }
  SUBCASE("q must stay strictly inside (0, p)") {
    CHECK_THROWS_AS(q_to_rho(0.4, 0.0), std::domain_error);
    CHECK_THROWS_AS(q_to_rho(0.4, 0.4), std::domain_error);
    CHECK_THROWS_AS(q_to_rho(0.4, -0.01), std::domain_error);
    CHECK_THROWS_AS(rho_to_q(0.4, -0.7), std::domain_error);
    CHECK_THROWS_AS(rho_to_q(0.4, 1.0), std::domain_error);
  }
}

TEST_CASE("make_config enforces the open interval") {
  CHECK_NOTHROW(make_config(100, 0.4, 0.26));
  CHECK_THROWS_AS(make_config(1, 0.4, 0.0), std::domain_error);
  CHECK_THROWS_AS(make_config(100, 0.4, -0.7), std::domain_error);
  CHECK_THROWS_AS(make_config(100, 0.4, 1.0), std::domain_error);
  // within kBoundEpsilon of either end
  CHECK_THROWS_AS(make_config(100, 0.4, -2.0 / 3.0 + 5e-11), std::domain_error);
  CHECK_THROWS_AS(make_config(100, 0.4, 1.0 - 5e-11), std::domain_error);
  // p > 1/2: lower bound comes from 1 - 2p + q > 0
  CHECK_NOTHROW(make_config(10, 0.8, -0.24));
  CHECK_THROWS_AS(make_config(10, 0.8, -0.26), std::domain_error);

  try {
    make_config(100, 0.4, -0.7);
    FAIL("expected a domain error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("(-0.6666666666666667, 1)") != std::string::npos);
  }
}

TEST_CASE("calibrate closed form") {
  SUBCASE("independence: beta = 0, alpha = log(p / (1 - p))") {
    const CalibratedParams params = calibrate(make_config(100, 0.4, 0.0));
    CHECK(std::abs(params.beta) < 1e-12);
    CHECK(params.alpha == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-14));
  }
  SUBCASE("beta = 0 at rho = 0 for every p and N") {
    for (double p = 0.05; p < 0.96; p += 0.05) {
      for (int n : {2, 7, 100, 1000}) {
        CHECK(std::abs(calibrate(make_config(n, p, 0.0)).beta) < 1e-12);
      }
    }
  }
  SUBCASE("matches extended-precision evaluation") {
    ConfigGenerator gen(5);
    for (int i = 0; i < 200; ++i) {
      const ModelConfig cfg = gen.next(50);
      const CalibratedParams params = calibrate(cfg);
      const auto ref = closed_form_long(cfg.n_credits, cfg.p, cfg.rho);
      CHECK(std::abs(params.alpha - static_cast<double>(ref.alpha)) < 1e-9);
      CHECK(std::abs(params.beta - static_cast<double>(ref.beta)) < 1e-9);
      CHECK(std::abs(params.alpha0 - static_cast<double>(ref.alpha0)) < 1e-7);
    }
  }
  SUBCASE("combined beta form log(q (1 - 2p + q) / (p - q)^2) is identical") {
    ConfigGenerator gen(6);
    for (int i = 0; i < 200; ++i) {
      const ModelConfig cfg = gen.next(10);
      const double p = cfg.p;
      const double q = cfg.q();
      const double combined = std::log(q * (1.0 - 2.0 * p + q) / ((p - q) * (p - q)));
      CHECK(calibrate(cfg).beta == doctest::Approx(combined).epsilon(1e-10));
    }
  }
  SUBCASE("close to the lower bound every value stays finite") {
    const double rho = -2.0 / 3.0 + 1e-9;
    const CalibratedParams params = calibrate(make_config(100, 0.4, rho));
    CHECK(std::isfinite(params.alpha));
    CHECK(std::isfinite(params.alpha0));
    CHECK(std::isfinite(params.beta));
    CHECK(std::isfinite(params.log_z));
    const auto ref = closed_form_long(100, 0.4L, rho);
    // q ~ 2.4e-10 carries ~1e-7 relative rounding from the double rho
    CHECK(std::abs(params.beta - static_cast<double>(ref.beta)) < 1e-6);
    CHECK(std::abs(params.alpha - static_cast<double>(ref.alpha)) < 1e-12);
  }
  SUBCASE("log Z stays finite at large N near both bounds") {
    for (double rho : {-2.0 / 3.0 + 1e-9, 1.0 - 1e-9}) {
      for (int n : {100, 10000, 1000000}) {
        CHECK(std::isfinite(calibrate(make_config(n, 0.4, rho)).log_z));
      }
    }
  }
}

TEST_CASE("calibration reproduces the constrained moments by enumeration") {
  SUBCASE("p = 0.4, rho = 0.26, N = 8") {
    const ModelConfig cfg = make_config(8, 0.4, 0.26);
    const CalibratedParams params = calibrate(cfg);
    const auto bf = brute_force(8, params.alpha, params.alpha0, params.beta);
    CHECK(std::abs(static_cast<double>(bf.e_l0l1) - 0.2224) < 1e-10);
    CHECK(std::abs(static_cast<double>(bf.log_z) - params.log_z) < 1e-12);
  }
  SUBCASE("random configs, N <= 12") {
    ConfigGenerator gen(21);
    for (int i = 0; i < 60; ++i) {
      const int n = 2 + i % 11;
      const ModelConfig cfg = gen.next(n);
      const CalibratedParams params = calibrate(cfg);
      const auto bf = brute_force(n, params.alpha, params.alpha0, params.beta);
      CHECK(std::abs(static_cast<double>(bf.e_l0) - cfg.p) < 1e-10);
      CHECK(std::abs(static_cast<double>(bf.e_l1) - cfg.p) < 1e-10);
      CHECK(std::abs(static_cast<double>(bf.e_l0l1) - cfg.q()) < 1e-10);
    }
  }
}

TEST_CASE("conditional_probs") {
  auto check = [](double rho, double expect0, double expect1) {
    const auto [r0, r1] = conditional_probs(make_config(10, 0.4, rho));
    CHECK(r0 == doctest::Approx(expect0).epsilon(1e-13));
    CHECK(r1 == doctest::Approx(expect1).epsilon(1e-13));
  };
  check(0.0, 0.4, 0.4);
  check(-0.5, 0.6, 0.1);
  check(0.26, 0.296, 0.556);

  ConfigGenerator gen(3);
  for (int i = 0; i < 500; ++i) {
    const ModelConfig cfg = gen.next(5);
    const auto [r0, r1] = conditional_probs(cfg);
    CHECK(r0 > 0.0);
    CHECK(r0 < 1.0);
    CHECK(r1 > 0.0);
    CHECK(r1 < 1.0);
    CHECK(std::abs((1.0 - cfg.p) * r0 + cfg.p * r1 - cfg.p) < 1e-15);
  }
}
