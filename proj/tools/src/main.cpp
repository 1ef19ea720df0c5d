#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ridge_equiv::cli;

  CLI::App app{
      "General ridge estimators for the general linear model: estimates, "
      "block decomposition of the error covariance, and exact checks for "
      "when the covariance-weighted and identity-weighted estimators (or "
      "their residual sums of squares) coincide for every observation "
      "vector."};
  app.require_subcommand(1);

  CommonOptions opts;
  app.add_option("--tol-rel", opts.tol.rel_eq,
                 "relative matrix-equality tolerance")
      ->capture_default_str();
  app.add_option("--tol-abs", opts.tol.abs_eq,
                 "absolute matrix-equality floor")
      ->capture_default_str();
  app.add_option("--seed", opts.seed,
                 "seed for generation and sampling (RIDGE_EQUIV_SEED "
                 "overrides)")
      ->capture_default_str();

  EstimateArgs estimate_args;
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate the coefficients and the residual sum of squares");
  estimate->add_option("--input", estimate_args.input, "model JSON file")
      ->required();
  estimate->add_option("--phi", estimate_args.phi, "weighting: identity|omega")
      ->capture_default_str();
  estimate
      ->add_option("--penalty", estimate_args.penalty, "penalty: k1|k2|zero")
      ->capture_default_str();

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check", "Run an equality checker and report per-condition residuals");
  check->add_option("--input", check_args.input, "model JSON file")->required();
  check
      ->add_option("--what", check_args.what,
                   "obe|gre|gre-bias|bias|bias-cov|d1|idem|rss0|rss|"
                   "rss-same-k|pd-special|all")
      ->capture_default_str();

  GenerateArgs generate_args;
  auto* generate = app.add_subcommand(
      "generate", "Construct a model instance with a prescribed property");
  generate
      ->add_option("--kind", generate_args.kind,
                   "random|rcond|gre-eq|rss-eq|bias-only|kruskal")
      ->capture_default_str();
  generate->add_option("--n", generate_args.n, "observations")->required();
  generate->add_option("--k", generate_args.k, "regressors")->required();
  generate->add_option("--scale", generate_args.scale, "magnitude of random blocks")
      ->capture_default_str();
  generate->add_option("--out", generate_args.out, "output model JSON file")
      ->required();

  DecomposeArgs decompose_args;
  auto* decompose = app.add_subcommand(
      "decompose", "Report the (Gamma, Xi, Delta) blocks of Omega");
  decompose->add_option("--input", decompose_args.input, "model JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }

  if (estimate->parsed()) {
    return cmd_estimate(estimate_args, opts, std::cout, std::cerr);
  }
  if (check->parsed()) {
    return cmd_check(check_args, opts, std::cout, std::cerr);
  }
  if (generate->parsed()) {
    return cmd_generate(generate_args, opts, std::cout, std::cerr);
  }
  return cmd_decompose(decompose_args, opts, std::cout, std::cerr);
}
