#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace ridge_equiv;
namespace ts = testsupport;

namespace {
const ToleranceConfig tol;

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

const Condition& find_condition(const CheckReport& report,
                                const std::string& name) {
  for (const auto& c : report.conditions) {
    if (c.name == name) return c;
  }
  REQUIRE_MESSAGE(false, "missing condition ", name);
  static Condition dummy;
  return dummy;
}
}

TEST_CASE("seeded SPD draws") {
  const Matrix one = gen_random_spd(1, 5, 1.0);
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0) > 0.0);

  const Matrix a = gen_random_spd(4, 123, 1.0);
  const Matrix b = gen_random_spd(4, 123, 1.0);
  CHECK(bitwise_equal(a, b));
  CHECK_FALSE(bitwise_equal(a, gen_random_spd(4, 124, 1.0)));

  CHECK(is_spd(a, tol));
  CHECK(min_eigenvalue(a) >= 0.1 - 1e-12);

  CHECK_THROWS_AS(gen_random_spd(0, 1, 1.0), PreconditionError);
}

TEST_CASE("instance generation is deterministic") {
  const GenKind kinds[] = {GenKind::RandomSPD,   GenKind::RcondOnly,
                           GenKind::GreEquality, GenKind::RssEquality,
                           GenKind::BiasOnly,    GenKind::KruskalForm};
  for (const GenKind kind : kinds) {
    const GenSpec spec{5, 2, kind, 321, 1.0};
    const ModelInstance a = gen_instance(spec);
    const ModelInstance b = gen_instance(spec);
    CHECK(bitwise_equal(a.X, b.X));
    CHECK(bitwise_equal(a.Omega, b.Omega));
    CHECK(bitwise_equal(a.K1, b.K1));
    CHECK(bitwise_equal(a.K2, b.K2));
  }
}

TEST_CASE("generated instances satisfy their target condition") {
  std::size_t index = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed, ++index) {
    const auto [n, k] = ts::DimCycle::at(index);

    {
      const ModelInstance m =
          gen_instance({n, k, GenKind::RandomSPD, seed, 1.0});
      CHECK(validate(m, tol).empty());
    }
    {
      const ModelInstance m =
          gen_instance({n, k, GenKind::RcondOnly, seed, 1.0});
      CHECK(validate(m, tol).empty());
      CHECK(check_blue_ols(m.X, m.Omega, tol).verdict);
      // The penalty relation is broken by construction.
      CHECK_FALSE(check_bias_equality(m, tol).verdict);
      CHECK_FALSE(oracle_estimator_equality(m, tol).holds);
    }
    {
      const ModelInstance m =
          gen_instance({n, k, GenKind::GreEquality, seed, 1.0});
      CHECK(validate(m, tol).empty());
      const auto oracle = oracle_estimator_equality(m, tol);
      CHECK(oracle.holds);
      CHECK(oracle.residual < 1e-10);
    }
    {
      const ModelInstance m =
          gen_instance({n, k, GenKind::RssEquality, seed, 1.0});
      CHECK(validate(m, tol).empty());
      CHECK(is_spd(m.K1, tol));
      CHECK(approx_equal(m.K1, m.K2, tol).holds);
      const auto oracle = oracle_rss_equality(m, tol);
      CHECK(oracle.holds);
      CHECK(oracle.residual < 1e-10);
    }
    {
      const ModelInstance m =
          gen_instance({n, k, GenKind::BiasOnly, seed, 1.0});
      CHECK(validate(m, tol).empty());
      const CheckReport bias = check_bias_equality(m, tol);
      CHECK(find_condition(bias, "Th33").holds);
      // Xi != 0 by construction.
      const Matrix Z = null_basis(m.X, tol).Z;
      const auto blocks = omega_blocks(m.X, Z, m.Omega, tol);
      CHECK(blocks.Xi.norm() > 1e-6);
      CHECK_FALSE(oracle_estimator_equality(m, tol).holds);
    }
    {
      const ModelInstance m =
          gen_instance({n, k, GenKind::KruskalForm, seed, 1.0});
      CHECK(validate(m, tol).empty());
      const Matrix Z = null_basis(m.X, tol).Z;
      const CheckReport r = check_rss0_equality(m.X, Z, m.Omega, tol);
      CHECK(r.verdict);
      CHECK(find_condition(r, "Mcond23").residual < 1e-10);
    }
  }
}

TEST_CASE("the two zero-penalty RSS forms agree on generated instances") {
  // The projector form and the Delta form decide the same statement.
  std::size_t index = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed, ++index) {
    const auto [n, k] = ts::DimCycle::at(index + 9);
    const GenKind kind =
        seed % 2 == 0 ? GenKind::KruskalForm : GenKind::RandomSPD;
    const ModelInstance m = gen_instance({n, k, kind, seed + 600, 1.0});
    const Matrix Z = null_basis(m.X, tol).Z;
    const CheckReport r = check_rss0_equality(m.X, Z, m.Omega, tol);
    CHECK(find_condition(r, "Mcond23").holds ==
          find_condition(r, "Kcond").holds);
  }
}

TEST_CASE("invalid generation specs are rejected") {
  CHECK_THROWS_AS(gen_instance({2, 2, GenKind::RandomSPD, 1, 1.0}),
                  PreconditionError);
  CHECK_THROWS_AS(gen_instance({3, 0, GenKind::RandomSPD, 1, 1.0}),
                  PreconditionError);
  CHECK_THROWS_AS(gen_instance({4, 2, GenKind::RandomSPD, 1, -1.0}),
                  PreconditionError);
}

TEST_CASE("single-fault perturbations flip exactly the targeted condition") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto [n, k] = ts::DimCycle::at(seed * 5 + 2);
    const ModelInstance base =
        gen_instance({n, k, GenKind::RssEquality, seed + 700, 1.0});
    const auto before = check_rss_equality(base, tol);
    REQUIRE(before.theorem_holds);

    {
      const ModelInstance hit = perturb_single_condition(
          base, FaultTarget::DeltaBlock, seed, 0.1);
      const auto after = check_rss_equality(hit, tol);
      CHECK_FALSE(find_condition(after.report, "Mcond23").holds);
      CHECK(find_condition(after.report, "Mcond21").holds);
      CHECK(find_condition(after.report, "Mcond22").holds);
      CHECK_FALSE(after.oracle_holds);
      CHECK(after.agreement);
    }
    {
      const ModelInstance hit = perturb_single_condition(
          base, FaultTarget::XiBlock, seed, 0.1);
      const auto after = check_rss_equality(hit, tol);
      CHECK_FALSE(find_condition(after.report, "Mcond22").holds);
      CHECK(find_condition(after.report, "Mcond23").holds);
      CHECK_FALSE(after.oracle_holds);
      CHECK(after.agreement);
    }
    {
      const ModelInstance hit = perturb_single_condition(
          base, FaultTarget::PenaltyRelation, seed, 0.1);
      const auto after = check_rss_equality(hit, tol);
      CHECK_FALSE(find_condition(after.report, "Mcond21").holds);
      CHECK(find_condition(after.report, "Mcond22").holds);
      CHECK(find_condition(after.report, "Mcond23").holds);
      CHECK_FALSE(after.oracle_holds);
      CHECK(after.agreement);
    }
  }
}

TEST_CASE("perturbed instances remain valid models") {
  const ModelInstance base =
      gen_instance({5, 2, GenKind::RssEquality, 800, 1.0});
  for (const FaultTarget target :
       {FaultTarget::DeltaBlock, FaultTarget::XiBlock,
        FaultTarget::PenaltyRelation}) {
    const ModelInstance hit = perturb_single_condition(base, target, 9, 0.1);
    CHECK(validate(hit, tol).empty());
  }
}
