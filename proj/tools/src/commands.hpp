#pragma once

#include "model_io.hpp"

#include "ridge_equiv/equivalence.hpp"
#include "ridge_equiv/generators.hpp"

#include <cstdint>
#include <ostream>
#include <string>

namespace ridge_equiv::cli {

// Exit-code contract: every execution path maps to exactly one of these.
inline constexpr int kExitTrue = 0;           // success / verdict true
inline constexpr int kExitFalse = 1;          // verdict false
inline constexpr int kExitPrecondition = 2;   // command precondition failed
inline constexpr int kExitInvalidModel = 3;   // file or model invariants broken
inline constexpr int kExitDisagreement = 4;   // criterion/oracle routes disagree
inline constexpr int kExitGeneration = 5;     // instance construction failed

struct CommonOptions {
  ToleranceConfig tol{};
  std::uint64_t seed = 0;
};

/// RIDGE_EQUIV_SEED overrides the given seed when set; it must parse as an
/// unsigned integer.
std::uint64_t resolve_seed(std::uint64_t cli_seed);

struct EstimateArgs {
  std::string input;
  std::string phi = "identity";    // identity | omega
  std::string penalty = "zero";    // k1 | k2 | zero
};

struct CheckArgs {
  std::string input;
  std::string what = "all";
};

struct GenerateArgs {
  std::string kind = "random";  // random | rcond | gre-eq | rss-eq |
                                // bias-only | kruskal
  int n = 0;
  int k = 0;
  double scale = 1.0;
  std::string out;
};

struct DecomposeArgs {
  std::string input;
};

int cmd_estimate(const EstimateArgs& args, const CommonOptions& opts,
                 std::ostream& out, std::ostream& err);
int cmd_check(const CheckArgs& args, const CommonOptions& opts,
              std::ostream& out, std::ostream& err);
int cmd_generate(const GenerateArgs& args, const CommonOptions& opts,
                 std::ostream& out, std::ostream& err);
int cmd_decompose(const DecomposeArgs& args, const CommonOptions& opts,
                  std::ostream& out, std::ostream& err);

}  // namespace ridge_equiv::cli
