#pragma once

#include "ridge_equiv/model.hpp"

#include <cstdint>
#include <random>

namespace ridge_equiv {

enum class GenKind {
  RandomSPD,    // nothing guaranteed beyond validity
  RcondOnly,    // Xi = 0 by construction, bias condition violated
  GreEquality,  // estimator maps coincide
  RssEquality,  // RSS forms coincide (K1 = K2 = kappa I, positive definite)
  BiasOnly,     // bias condition holds, Xi != 0
  KruskalForm,  // Z^T Omega Z = Z^T Z by construction
};

struct GenSpec {
  int n = 0;
  int k = 0;
  GenKind kind = GenKind::RandomSPD;
  std::uint64_t seed = 0;
  double scale = 1.0;
};

struct GenerationError : std::runtime_error {
  std::uint64_t seed;
  GenerationError(const std::string& what, std::uint64_t seed_value)
      : std::runtime_error(what), seed(seed_value) {}
};

/// Deterministic uniform doubles from a mersenne-twister stream. The mapping
/// (x >> 11) * 2^-53 is fully specified, so identical seeds give bit-identical
/// output on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool coin() { return (engine_() & 1u) != 0; }

  Matrix matrix(Index rows, Index cols, double lo, double hi);
  Vector vector(Index size, double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

/// M^T M + 0.1 * scale * I for a uniform random M, so the smallest eigenvalue
/// is at least 0.1 * scale. Bit-identical for a fixed seed.
Matrix gen_random_spd(Index dim, std::uint64_t seed, double scale = 1.0);

/// Seeded instance construction. The emitted instance passes validate and the
/// kind's target condition holds by construction (internally verified at
/// residual 1e-10); for RcondOnly and BiasOnly the complementary condition is
/// violated, redrawing up to 16 times. GenerationError (carrying the seed)
/// after the redraw budget.
ModelInstance gen_instance(const GenSpec& spec);

enum class FaultTarget {
  DeltaBlock,       // shifts Delta only; flips "Mcond23"
  XiBlock,          // shifts Xi only; flips "Rcond"/"Mcond22"
  PenaltyRelation,  // shifts K2 only; flips "Th33"/"Mcond21"
};

/// Perturbs exactly one atomic condition of a satisfying instance, leaving
/// the other block coordinates untouched.
ModelInstance perturb_single_condition(const ModelInstance& instance,
                                       FaultTarget target, std::uint64_t seed,
                                       double magnitude = 0.1);

}  // namespace ridge_equiv
