#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>

#include "bumpdirac/angular.hpp"
#include "bumpdirac/coefficients.hpp"
#include "bumpdirac/parallel.hpp"
#include "cli.hpp"
#include "csv.hpp"
#include "validate.hpp"

namespace bumpdirac::cli {

using nlohmann::json;

namespace {

// Errors that mean the input was unusable rather than the numerics failing.
bool is_validation_kind(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::geometry:
    case ErrorKind::shape:
    case ErrorKind::degenerate_profile:
    case ErrorKind::domain:
    case ErrorKind::gap_parameter:
    case ErrorKind::configuration:
    case ErrorKind::resolvent_parameter:
      return true;
    default:
      return false;
  }
}

void write_json(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::configuration, "cannot write " + path.string());
  out << value.dump(2) << '\n';
}

json intervals_json(std::span<const Interval> parts) {
  json out = json::array();
  for (const auto& [lo, hi] : parts) out.push_back({lo, hi});
  return out;
}

DensityOptions density_options(const ExperimentConfig& cfg) {
  DensityOptions options;
  options.step.tolerance = cfg.tolerances.ode;
  return options;
}

BumpPotential truncated(const BumpPotential& potential, std::size_t count) {
  std::vector<Bump> bumps(potential.bumps().begin(), potential.bumps().begin() + count);
  std::vector<double> distances(potential.distances().begin(), potential.distances().begin() + count);
  return BumpPotential(std::move(bumps), std::move(distances), potential.boundary_angle());
}

RunResult run_density(const ExperimentConfig& cfg) {
  RunResult result;
  const auto kappas = cfg.grid.nodes();
  const auto options = density_options(cfg);
  const auto product = density_profile(cfg.potential, kappas, DensityRoute::product, cfg.threads, options);
  const auto direct = density_profile(cfg.potential, kappas, DensityRoute::direct, cfg.threads, options);
  const auto path = cfg.out / "density.csv";
  {
    CsvWriter csv(path, {"kappa", "lambda", "density_product", "density_direct"});
    for (std::size_t i = 0; i < kappas.size(); ++i)
      csv.row(kappas[i], lambda_of_kappa(kappas[i]), product.densities[i], direct.densities[i]);
  }
  result.artifacts.push_back(path);
  double worst = 0.0;
  for (std::size_t i = 0; i < kappas.size(); ++i)
    worst = std::max(worst, std::abs(product.densities[i] - direct.densities[i]) / direct.densities[i]);
  result.summary = std::to_string(kappas.size()) + " nodes, max relative route difference " + format_number(worst);

  if (cfg.eigenvalues) {
    StepFunctionOptions step;
    step.threads = cfg.threads;
    step.step.tolerance = cfg.tolerances.ode;
    const auto& e = *cfg.eigenvalues;
    const auto steps = regular_step_function(cfg.potential, e.b, e.lambda_min, e.lambda_max, step);
    const auto eig = cfg.out / "eigenvalues.csv";
    {
      CsvWriter csv(eig, {"lambda", "kappa", "jump"});
      for (const auto& s : steps.steps) csv.row(s.lambda, s.kappa, s.jump);
    }
    result.artifacts.push_back(eig);
    result.summary += "; " + std::to_string(steps.steps.size()) + " eigenvalues on [0, " + format_number(e.b) + "]";
    if (!steps.unresolved.empty())
      result.summary += " (" + std::to_string(steps.unresolved.size()) + " unresolved cells)";
  }
  return result;
}

json stage_json(const ConstructionStage& s) {
  return {{"stage", s.stage},
          {"xi", intervals_json(s.xi)},
          {"epsilon", s.epsilon},
          {"bump_count", s.bump_count},
          {"distances", s.distances},
          {"gaps", s.gaps},
          {"budgets", s.budgets},
          {"s_measure", s.s_measure},
          {"s_intervals", intervals_json(s.s_intervals)},
          {"retained", s.retained},
          {"thresholds", {{"stage", s.threshold}, {"fixed", s.fixed_measures}}}};
}

RunResult run_construct(const ExperimentConfig& cfg) {
  RunResult result;
  ConstructionConfig config = cfg.construction;
  config.measure.threads = cfg.threads;
  config.concentration.threads = cfg.threads;
  config.on_bump = [](std::size_t j, double d, double gap) {
    std::cerr << "bump " << j << ": distance " << format_number(d) << ", gap " << format_number(gap) << '\n';
  };
  const auto built = build_pearson_sequence(config);

  json log = {{"complete", built.complete}, {"stages", json::array()}};
  if (!built.complete) log["failure"] = built.failure;
  json fixed = json::array();
  for (double t : config.fixed_thresholds) fixed.push_back(t);
  log["fixed_thresholds"] = fixed;
  for (const auto& s : built.stages) log["stages"].push_back(stage_json(s));
  const auto log_path = cfg.out / "stages.json";
  write_json(log_path, log);
  result.artifacts.push_back(log_path);

  const auto kappas = cfg.grid.nodes();
  const auto csv_path = cfg.out / "stage_densities.csv";
  {
    CsvWriter csv(csv_path, {"stage", "kappa", "density"});
    for (const auto& s : built.stages) {
      const auto potential = truncated(built.potential, s.bump_count);
      const auto profile = density_profile(potential, kappas, DensityRoute::product, cfg.threads,
                                           config.concentration.density);
      for (std::size_t i = 0; i < kappas.size(); ++i) csv.row(s.stage, kappas[i], profile.densities[i]);
    }
  }
  result.artifacts.push_back(csv_path);

  std::string summary;
  for (const auto& s : built.stages)
    summary += "stage " + std::to_string(s.stage) + ": " + std::to_string(s.bump_count) + " bumps, |S| = " +
               format_number(s.s_measure) + " vs eps = " + format_number(s.epsilon) + "\n";
  if (!built.complete) {
    result.exit_code = 2;
    summary += "construction stopped: " + built.failure;
  }
  result.summary = summary;
  return result;
}

RunResult run_concentration(const ExperimentConfig& cfg) {
  RunResult result;
  ConcentrationOptions options;
  options.cells_per_unit = cfg.concentration.cells_per_unit;
  options.threads = cfg.threads;
  options.density = density_options(cfg);
  const auto s = concentration_set(cfg.potential, cfg.concentration.xi, cfg.concentration.threshold, options);
  const json report = {{"xi", intervals_json(cfg.concentration.xi)},
                       {"threshold", s.threshold},
                       {"intervals", intervals_json(s.intervals)},
                       {"measure", s.measure},
                       {"xi_measure", s.xi_measure},
                       {"retained", s.retained},
                       {"retention_holds", s.retention_holds},
                       {"cells", s.cells}};
  const auto path = cfg.out / "concentration.json";
  write_json(path, report);
  result.artifacts.push_back(path);
  const auto csv_path = cfg.out / "concentration.csv";
  {
    CsvWriter csv(csv_path, {"lower", "upper"});
    for (const auto& [lo, hi] : s.intervals) csv.row(lo, hi);
  }
  result.artifacts.push_back(csv_path);
  result.summary = "|S| = " + format_number(s.measure) + " of |Xi| = " + format_number(s.xi_measure) +
                   ", retained mass outside S " + format_number(s.retained);
  if (!s.retention_holds) result.summary += " (retention bound violated)";
  return result;
}

RunResult run_asymptotics(const ExperimentConfig& cfg) {
  RunResult result;
  const BumpProfile profile =
      cfg.potential.empty() ? cfg.construction.bumps.profile : cfg.potential.bump(0).profile;
  const auto kappas = cfg.grid.nodes();
  const auto& heights = cfg.asymptotics.heights;
  struct Row {
    double kappa, height, a, a_asym, b, b_asym, c, c_asym, m, m_asym, kernel;
  };
  const auto rows = parallel_map(kappas.size() * heights.size(), cfg.threads, [&](std::size_t i) {
    const double kappa = kappas[i / heights.size()];
    const double h = heights[i % heights.size()];
    const auto param = SpectralParam::from_kappa(kappa);
    StepControl step;
    step.tolerance = cfg.tolerances.ode;
    const auto transfer = profile.shape() == ProfileShape::rectangular
                              ? closed_form_rectangular(h / profile.width(), profile.width(), param.lambda())
                              : bump_transfer(Bump{h, profile}, 0.0, param.lambda(), 0, step);
    const auto exact = abc_from_transfer(transfer, param);
    const auto asym = abc_asymptotic(profile, 0.0, param, h);
    return Row{kappa,         h,          exact.mean,          asym.mean, exact.cos_part, asym.cos_part,
               exact.sin_part, asym.sin_part, mean_log_factor(exact), asym.mean_log, asym.kernel};
  });
  const auto path = cfg.out / "asymptotics.csv";
  {
    CsvWriter csv(path, {"kappa", "height", "A", "A_asymptotic", "B", "B_asymptotic", "C", "C_asymptotic", "m",
                         "m_asymptotic", "kernel"});
    for (const auto& r : rows)
      csv.row(r.kappa, r.height, r.a, r.a_asym, r.b, r.b_asym, r.c, r.c_asym, r.m, r.m_asym, r.kernel);
  }
  result.artifacts.push_back(path);
  result.summary = std::to_string(rows.size()) + " (kappa, height) pairs";

  if (cfg.asymptotics.divergence_terms > 0) {
    std::vector<Bump> bumps;
    for (std::size_t j = 1; j <= cfg.asymptotics.divergence_terms; ++j)
      bumps.push_back(cfg.construction.bumps.bump(j));
    const auto div = cfg.out / "divergence.csv";
    const auto sums = parallel_map(kappas.size(), cfg.threads, [&](std::size_t i) {
      return divergence_partial_sums(bumps, SpectralParam::from_kappa(kappas[i]));
    });
    {
      CsvWriter csv(div, {"kappa", "n", "partial_sum"});
      for (std::size_t i = 0; i < kappas.size(); ++i)
        for (std::size_t n = 0; n < sums[i].size(); ++n) csv.row(kappas[i], n + 1, sums[i][n]);
    }
    result.artifacts.push_back(div);
  }
  return result;
}

RunResult run_channels(const ExperimentConfig& cfg) {
  RunResult result;
  const auto kappas = cfg.grid.nodes();
  ChannelDensityOptions options;
  options.tail_end = cfg.channels.tail_end;
  options.step.tolerance = cfg.tolerances.ode;

  struct Channel {
    std::vector<double> densities;
    std::string error;
  };
  // Channels are independent; one failing channel does not stop the others.
  const auto channels = parallel_map(cfg.ks.size(), cfg.threads, [&](std::size_t c) {
    Channel out;
    try {
      for (double kappa : kappas)
        out.densities.push_back(density_k(cfg.potential, SpectralParam::from_kappa(kappa), cfg.ks[c], options));
    } catch (const Error& e) {
      if (is_validation_kind(e.kind())) throw;
      out.densities.clear();
      out.error = e.what();
    }
    return out;
  });

  const auto path = cfg.out / "channels.csv";
  {
    CsvWriter csv(path, {"k", "kappa", "density", "c_bound", "c_tilde_bound"});
    for (std::size_t c = 0; c < cfg.ks.size(); ++c) {
      if (!channels[c].error.empty()) continue;
      for (std::size_t i = 0; i < kappas.size(); ++i) {
        const auto bounds = channel_constants(cfg.ks[c], SpectralParam::from_kappa(kappas[i]));
        csv.row(cfg.ks[c], kappas[i], channels[c].densities[i], bounds.radial, bounds.angular);
      }
    }
  }
  result.artifacts.push_back(path);

  const auto union_path = cfg.out / "channel_union.csv";
  std::size_t finished = 0;
  {
    CsvWriter csv(union_path, {"kappa", "min_density", "max_density"});
    for (const auto& ch : channels) finished += ch.error.empty() ? 1 : 0;
    for (std::size_t i = 0; i < kappas.size() && finished > 0; ++i) {
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& ch : channels)
        if (ch.error.empty()) {
          lo = std::min(lo, ch.densities[i]);
          hi = std::max(hi, ch.densities[i]);
        }
      csv.row(kappas[i], lo, hi);
    }
  }
  result.artifacts.push_back(union_path);

  json report = {{"channels", json::array()}};
  for (std::size_t c = 0; c < cfg.ks.size(); ++c) {
    json entry = {{"k", cfg.ks[c]}, {"ok", channels[c].error.empty()}};
    if (!channels[c].error.empty()) entry["error"] = channels[c].error;
    report["channels"].push_back(entry);
  }
  if (cfg.channels.green) {
    const std::complex<double> lambda(cfg.channels.green_re, cfg.channels.green_im);
    report["green"] = json::array();
    for (int k : cfg.ks) {
      GreenOptions g;
      g.boundary_angle = cfg.potential.boundary_angle();
      g.nodes = cfg.channels.green_nodes;
      const double coarse = greens_hs_norm(k, lambda, g);
      g.nodes *= 2;
      const double fine = greens_hs_norm(k, lambda, g);
      report["green"].push_back({{"k", k},
                                 {"lambda", {lambda.real(), lambda.imag()}},
                                 {"nodes", cfg.channels.green_nodes},
                                 {"value", coarse},
                                 {"value_doubled", fine},
                                 {"relative_change", std::abs(fine - coarse) / std::abs(coarse)}});
    }
  }
  const auto json_path = cfg.out / "channels.json";
  write_json(json_path, report);
  result.artifacts.push_back(json_path);

  result.summary = std::to_string(finished) + " of " + std::to_string(cfg.ks.size()) + " channels finished";
  if (finished < cfg.ks.size()) {
    result.exit_code = 2;
    for (std::size_t c = 0; c < cfg.ks.size(); ++c)
      if (!channels[c].error.empty())
        result.summary += "\nchannel " + std::to_string(cfg.ks[c]) + ": " + channels[c].error;
  }
  return result;
}

RunResult run_validate(const ExperimentConfig& cfg) {
  RunResult result;
  const auto checks = run_invariant_suite(cfg.validate.samples, cfg.seed);
  const auto path = cfg.out / "validate.csv";
  std::size_t failed = 0;
  {
    CsvWriter csv(path, {"check", "passed", "worst", "limit", "samples"});
    for (const auto& c : checks) {
      csv.row(c.name, c.passed ? 1 : 0, c.worst, c.limit, c.samples);
      failed += c.passed ? 0 : 1;
    }
  }
  result.artifacts.push_back(path);
  std::string table;
  for (const auto& c : checks)
    table += std::string(c.passed ? "PASS " : "FAIL ") + c.name + "  worst " + short_number(c.worst) +
             "  limit " + short_number(c.limit) + "\n";
  table += std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks passed";
  result.summary = table;
  if (failed > 0) result.exit_code = 1;
  return result;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out);
  RunResult result;
  json manifest = {{"tool", "bumpdirac"},
                   {"version", tool_version},
                   {"command", to_string(cfg.command)},
                   {"config", cfg.resolved}};
  try {
    switch (cfg.command) {
      case Command::density:
        result = run_density(cfg);
        break;
      case Command::construct:
        result = run_construct(cfg);
        break;
      case Command::concentration:
        result = run_concentration(cfg);
        break;
      case Command::asymptotics:
        result = run_asymptotics(cfg);
        break;
      case Command::channels:
        result = run_channels(cfg);
        break;
      case Command::validate:
        result = run_validate(cfg);
        break;
    }
    if (result.exit_code == 2) {
      const auto diag = cfg.out / "diagnostic.json";
      write_json(diag, {{"command", to_string(cfg.command)}, {"kind", "numerical"}, {"message", result.summary}});
      result.artifacts.push_back(diag);
    }
  } catch (const Error& e) {
    result.exit_code = is_validation_kind(e.kind()) ? 1 : 2;
    result.summary = e.what();
    const auto diag = cfg.out / "diagnostic.json";
    write_json(diag, {{"command", to_string(cfg.command)}, {"kind", std::string(to_string(e.kind()))},
                      {"message", e.what()}});
    result.artifacts.push_back(diag);
  }
  json artifacts = json::array();
  for (const auto& a : result.artifacts) artifacts.push_back(a.filename().string());
  manifest["artifacts"] = artifacts;
  manifest["exit_code"] = result.exit_code;
  const auto manifest_path = cfg.out / "manifest.json";
  write_json(manifest_path, manifest);
  result.artifacts.push_back(manifest_path);
  return result;
}

}  // namespace bumpdirac::cli
