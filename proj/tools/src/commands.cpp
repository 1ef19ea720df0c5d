#include "commands.hpp"

#include "ridge_equiv/decomposition.hpp"

#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

namespace ridge_equiv::cli {

namespace {

json base_report(const std::string& command, const ToleranceConfig& tol) {
  json j;
  j["command"] = command;
  j["tolerance"] = tolerance_to_json(tol);
  j["verdict"] = false;
  j["conditions"] = json::array();
  return j;
}

void emit(std::ostream& out, const json& report) {
  out << report.dump(2) << "\n";
}

int report_violations(const std::vector<Violation>& violations,
                      std::ostream& err) {
  err << "invalid model:\n";
  for (const auto& v : violations) {
    err << "  " << v.invariant << " (residual " << v.residual << ")\n";
  }
  return kExitInvalidModel;
}

ModelInstance load_validated(const std::string& path,
                             const ToleranceConfig& tol, std::ostream& err,
                             int& exit_code) {
  ModelInstance instance = load_model_file(path);
  const auto violations = validate(instance, tol);
  if (!violations.empty()) {
    exit_code = report_violations(violations, err);
  }
  return instance;
}

Condition oracle_condition(const std::string& name, bool holds,
                           double residual) {
  return {name, residual, holds};
}

struct CheckOutcome {
  std::vector<Condition> conditions;
  bool verdict = false;
  bool agreement = true;
  std::optional<Matrix> witness;
  std::optional<Index> d1_rank_value;
};

CheckOutcome from_report(const CheckReport& report) {
  CheckOutcome o;
  o.conditions = report.conditions;
  o.verdict = report.verdict;
  o.witness = report.witness;
  return o;
}

CheckOutcome from_verdict(const EquivalenceVerdict& v,
                          const std::string& oracle_name) {
  CheckOutcome o = from_report(v.report);
  o.conditions.push_back(
      oracle_condition(oracle_name, v.oracle_holds, v.oracle_residual));
  o.agreement = v.agreement;
  return o;
}

struct D1Samples {
  std::vector<Vector> betas;
  std::vector<double> sigma2s;
};

D1Samples draw_d1_samples(const ModelInstance& instance, std::uint64_t seed,
                          std::size_t count) {
  D1Samples s;
  if (instance.beta && instance.sigma2) {
    s.betas.push_back(*instance.beta);
    s.sigma2s.push_back(*instance.sigma2);
  }
  Rng rng(seed);
  while (s.betas.size() < count) {
    s.betas.push_back(rng.vector(instance.k, -2.0, 2.0));
    s.sigma2s.push_back(rng.uniform(0.25, 4.0));
  }
  return s;
}

CheckOutcome run_d1(const ModelInstance& instance, const CommonOptions& opts) {
  const D1Samples samples = draw_d1_samples(instance, opts.seed, 10);
  CheckOutcome o = from_report(
      check_d1_zero(instance, samples.betas, samples.sigma2s, opts.tol));
  o.d1_rank_value = d1_rank(
      d1_matrix(instance, samples.betas.front(), samples.sigma2s.front()),
      opts.tol);
  return o;
}

CheckOutcome run_pd_special(const ModelInstance& instance,
                            const ToleranceConfig& tol) {
  CheckOutcome o = from_report(check_pd_special(instance, tol));
  const auto oracle = oracle_estimator_equality(instance, tol);
  o.agreement = (o.verdict == oracle.holds);
  o.conditions.push_back(oracle_condition("oracle_estimator_equality",
                                          oracle.holds, oracle.residual));
  return o;
}

bool idempotent_preconditions(const ModelInstance& m,
                              const ToleranceConfig& tol) {
  return approx_equal(m.K1 * m.K1, m.K1, tol).holds &&
         approx_equal(m.K2 * m.K2, m.K2, tol).holds && is_psd(m.K1, tol) &&
         is_psd(m.K2, tol);
}

bool same_k_preconditions(const ModelInstance& m, const ToleranceConfig& tol) {
  return approx_equal(m.K1, m.K2, tol).holds && is_spd(m.K1, tol);
}

bool pd_preconditions(const ModelInstance& m, const ToleranceConfig& tol) {
  if (approx_equal(m.K1, m.K2, tol).holds) return is_spd(m.K1, tol);
  return is_spd(m.K1, tol) && is_spd(m.K2, tol);
}

void append_prefixed(CheckOutcome& into, const CheckOutcome& part,
                     const std::string& prefix) {
  for (const auto& c : part.conditions) {
    into.conditions.push_back({prefix + "." + c.name, c.residual, c.holds});
  }
  into.agreement = into.agreement && part.agreement;
}

CheckOutcome run_all(const ModelInstance& instance, const CommonOptions& opts) {
  const ToleranceConfig& tol = opts.tol;
  CheckOutcome all;

  const CheckOutcome obe = from_report(
      check_blue_ols(instance.X, instance.Omega, tol));
  append_prefixed(all, obe, "obe");

  const auto gre = check_gre_equality(instance, tol);
  append_prefixed(all, from_verdict(gre, "oracle_estimator_equality"), "gre");

  const auto gre_bias = check_gre_equality_via_bias(instance, tol);
  append_prefixed(all, from_verdict(gre_bias, "oracle_estimator_equality"),
                  "gre-bias");
  all.agreement =
      all.agreement && (gre.theorem_holds == gre_bias.theorem_holds);

  append_prefixed(all, from_report(check_bias_equality(instance, tol)),
                  "bias");

  const CheckReport bias_cov = check_bias_cov_equality(instance, tol);
  append_prefixed(all, from_report(bias_cov), "bias-cov");

  const CheckOutcome d1 = run_d1(instance, opts);
  append_prefixed(all, d1, "d1");
  all.d1_rank_value = d1.d1_rank_value;
  all.agreement =
      all.agreement && (d1.conditions.front().holds == bias_cov.verdict);

  const Matrix Z = resolve_null_basis(instance, tol);
  append_prefixed(
      all, from_report(check_rss0_equality(instance.X, Z, instance.Omega, tol)),
      "rss0");

  const auto rss_v = check_rss_equality(instance, tol);
  append_prefixed(all, from_verdict(rss_v, "oracle_rss_equality"), "rss");

  if (idempotent_preconditions(instance, tol)) {
    append_prefixed(all, from_report(check_idempotent_necessity(instance, tol)),
                    "idem");
  }
  if (same_k_preconditions(instance, tol)) {
    const auto same_k = check_rss_equality_same_k(instance, tol);
    append_prefixed(all, from_verdict(same_k, "oracle_rss_equality"),
                    "rss-same-k");
  }
  if (pd_preconditions(instance, tol)) {
    append_prefixed(all, run_pd_special(instance, tol), "pd-special");
  }

  all.verdict = true;
  for (const auto& c : all.conditions) all.verdict = all.verdict && c.holds;
  all.witness = gre.report.witness;
  return all;
}

}  // namespace

std::uint64_t resolve_seed(std::uint64_t cli_seed) {
  const char* env = std::getenv("RIDGE_EQUIV_SEED");
  if (env == nullptr || *env == '\0') return cli_seed;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    throw PreconditionError("RIDGE_EQUIV_SEED must be an unsigned integer");
  }
  return static_cast<std::uint64_t>(value);
}

int cmd_estimate(const EstimateArgs& args, const CommonOptions& opts,
                 std::ostream& out, std::ostream& err) {
  try {
    int exit_code = kExitTrue;
    const ModelInstance instance =
        load_validated(args.input, opts.tol, err, exit_code);
    if (exit_code != kExitTrue) return exit_code;
    if (!instance.y) {
      err << "estimate requires \"y\" in the model file\n";
      return kExitPrecondition;
    }

    Matrix Phi;
    PhiKind kind;
    if (args.phi == "identity") {
      Phi = Matrix::Identity(instance.n, instance.n);
      kind = PhiKind::Identity;
    } else if (args.phi == "omega") {
      Phi = instance.Omega;
      kind = PhiKind::Omega;
    } else {
      err << "--phi must be identity or omega\n";
      return kExitPrecondition;
    }

    Matrix K;
    if (args.penalty == "k1") {
      K = instance.K1;
    } else if (args.penalty == "k2") {
      K = instance.K2;
    } else if (args.penalty == "zero") {
      K = Matrix::Zero(instance.k, instance.k);
    } else {
      err << "--penalty must be k1, k2 or zero\n";
      return kExitPrecondition;
    }

    const RidgeMap map = ridge_map(instance.X, Phi, K, kind);
    const Vector estimate_value = estimate(map, *instance.y);
    const double rss_value = rss(instance.X, Phi, K, *instance.y);

    json report = base_report("estimate", opts.tol);
    report["verdict"] = true;
    report["estimate"] = vector_to_json(estimate_value);
    report["rss"] = rss_value;
    emit(out, report);
    return kExitTrue;
  } catch (const ModelFileError& e) {
    err << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const DimensionError& e) {
    err << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const PreconditionError& e) {
    err << e.what() << "\n";
    return kExitPrecondition;
  }
}

int cmd_check(const CheckArgs& args, const CommonOptions& opts,
              std::ostream& out, std::ostream& err) {
  try {
    int exit_code = kExitTrue;
    const ModelInstance instance =
        load_validated(args.input, opts.tol, err, exit_code);
    if (exit_code != kExitTrue) return exit_code;
    const ToleranceConfig& tol = opts.tol;

    CheckOutcome outcome;
    if (args.what == "obe") {
      outcome = from_report(check_blue_ols(instance.X, instance.Omega, tol));
    } else if (args.what == "gre") {
      outcome = from_verdict(check_gre_equality(instance, tol),
                             "oracle_estimator_equality");
    } else if (args.what == "gre-bias") {
      outcome = from_verdict(check_gre_equality_via_bias(instance, tol),
                             "oracle_estimator_equality");
    } else if (args.what == "bias") {
      outcome = from_report(check_bias_equality(instance, tol));
    } else if (args.what == "bias-cov") {
      outcome = from_report(check_bias_cov_equality(instance, tol));
    } else if (args.what == "d1") {
      outcome = run_d1(instance, opts);
    } else if (args.what == "idem") {
      outcome = from_report(check_idempotent_necessity(instance, tol));
    } else if (args.what == "rss0") {
      const Matrix Z = resolve_null_basis(instance, tol);
      outcome = from_report(
          check_rss0_equality(instance.X, Z, instance.Omega, tol));
    } else if (args.what == "rss") {
      outcome = from_verdict(check_rss_equality(instance, tol),
                             "oracle_rss_equality");
    } else if (args.what == "rss-same-k") {
      outcome = from_verdict(check_rss_equality_same_k(instance, tol),
                             "oracle_rss_equality");
    } else if (args.what == "pd-special") {
      outcome = run_pd_special(instance, tol);
    } else if (args.what == "all") {
      outcome = run_all(instance, opts);
    } else {
      err << "unknown checker \"" << args.what << "\"\n";
      return kExitPrecondition;
    }

    json report = base_report("check", opts.tol);
    report["what"] = args.what;
    report["verdict"] = outcome.verdict;
    report["conditions"] = conditions_to_json(outcome.conditions);
    // Keys are stable per command: checkers that can carry a witness or a
    // rank always emit the key, with null standing in when unavailable.
    if (args.what == "gre" || args.what == "obe" || args.what == "all") {
      report["witness_G"] =
          outcome.witness ? matrix_to_json(*outcome.witness) : json(nullptr);
    }
    if (args.what == "d1" || args.what == "all") {
      report["d1_rank"] =
          outcome.d1_rank_value ? json(*outcome.d1_rank_value) : json(nullptr);
    }
    emit(out, report);

    if (!outcome.agreement) {
      err << "criterion and oracle verdicts disagree\n";
      return kExitDisagreement;
    }
    return outcome.verdict ? kExitTrue : kExitFalse;
  } catch (const ModelFileError& e) {
    err << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const DimensionError& e) {
    err << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const PreconditionError& e) {
    err << e.what() << "\n";
    return kExitPrecondition;
  } catch (const DiagnosticError& e) {
    err << e.what() << "\n";
    return kExitDisagreement;
  }
}

int cmd_generate(const GenerateArgs& args, const CommonOptions& opts,
                 std::ostream& out, std::ostream& err) {
  GenSpec spec;
  spec.n = args.n;
  spec.k = args.k;
  spec.scale = args.scale;
  try {
    spec.seed = resolve_seed(opts.seed);
    if (args.kind == "random") {
      spec.kind = GenKind::RandomSPD;
    } else if (args.kind == "rcond") {
      spec.kind = GenKind::RcondOnly;
    } else if (args.kind == "gre-eq") {
      spec.kind = GenKind::GreEquality;
    } else if (args.kind == "rss-eq") {
      spec.kind = GenKind::RssEquality;
    } else if (args.kind == "bias-only") {
      spec.kind = GenKind::BiasOnly;
    } else if (args.kind == "kruskal") {
      spec.kind = GenKind::KruskalForm;
    } else {
      err << "unknown kind \"" << args.kind << "\"\n";
      return kExitPrecondition;
    }

    const ModelInstance instance = gen_instance(spec);
    save_model_file(args.out, instance);

    // Round-trip guard: the written file must load back into a valid model.
    const ModelInstance reloaded = load_model_file(args.out);
    if (!validate(reloaded, opts.tol).empty()) {
      err << "generated file failed to round-trip (seed " << spec.seed << ")\n";
      return kExitGeneration;
    }

    json report = base_report("generate", opts.tol);
    report["verdict"] = true;
    report["kind"] = args.kind;
    report["n"] = spec.n;
    report["k"] = spec.k;
    report["seed"] = spec.seed;
    report["out"] = args.out;
    emit(out, report);
    return kExitTrue;
  } catch (const GenerationError& e) {
    err << e.what() << " (seed " << e.seed << ")\n";
    return kExitGeneration;
  } catch (const ModelFileError& e) {
    err << e.what() << "\n";
    return kExitGeneration;
  } catch (const PreconditionError& e) {
    err << e.what() << "\n";
    return kExitPrecondition;
  }
}

int cmd_decompose(const DecomposeArgs& args, const CommonOptions& opts,
                  std::ostream& out, std::ostream& err) {
  try {
    int exit_code = kExitTrue;
    const ModelInstance instance =
        load_validated(args.input, opts.tol, err, exit_code);
    if (exit_code != kExitTrue) return exit_code;

    const Matrix Z = resolve_null_basis(instance, opts.tol);
    const BlockDecomposition blocks =
        omega_blocks(instance.X, Z, instance.Omega, opts.tol);
    const auto reconstruction = approx_equal(
        reconstruct_omega(instance.X, Z, blocks), instance.Omega, opts.tol);

    json report = base_report("decompose", opts.tol);
    report["verdict"] = reconstruction.holds;
    report["conditions"] = conditions_to_json(
        {Condition{"reconstruction", reconstruction.residual,
                   reconstruction.holds}});
    report["blocks"] = json{{"Gamma", matrix_to_json(blocks.Gamma)},
                            {"Xi", matrix_to_json(blocks.Xi)},
                            {"Delta", matrix_to_json(blocks.Delta)},
                            {"A", matrix_to_json(blocks.A)},
                            {"B", matrix_to_json(blocks.B)},
                            {"C", matrix_to_json(blocks.C)},
                            {"D", matrix_to_json(blocks.D)}};
    report["Z"] = matrix_to_json(Z);
    emit(out, report);
    return reconstruction.holds ? kExitTrue : kExitFalse;
  } catch (const ModelFileError& e) {
    err << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const DimensionError& e) {
    err << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const PreconditionError& e) {
    err << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace ridge_equiv::cli
