#include "cli.hpp"

#include "ergodic/conditions.hpp"
#include "ergodic/decomposition.hpp"
#include "ergodic/economy.hpp"
#include "ergodic/errors.hpp"
#include "ergodic/io.hpp"
#include "ergodic/simulation.hpp"
#include "ergodic/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

namespace ergodic::cli {

namespace {

using io::json;

struct Emitted {
  std::string text;
  std::string default_name;
  int code = kOk;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Emitted report_output(const ConditionReport& report, const std::string& name) {
  return {dump(io::to_json(report)), name, report.satisfied ? kOk : kNotSatisfied};
}

Observable load_observable(const MarkovKernel& kernel, const std::string& file, const std::string& indicator) {
  if (!file.empty()) return io::observable_from_json(io::read_json_file(file), kernel.space());
  if (!indicator.empty()) return Observable::indicator(kernel.space(), {kernel.space().index_of(indicator)});
  throw InvalidInput("one of --observable or --indicator is required");
}

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-state Markov kernel analysis: ergodic decomposition, spectral split, "
               "Doeblin/Harris checks, induced economy chains"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("-o,--output", output, "Output file (default: stdout, or $" + std::string(kOutputDirEnv) + ")");

  std::function<Emitted()> action;

  std::string kernel_file, model_file, measure_file, observable_file, indicator, x0_label, density_file;
  std::vector<std::string> subset;
  double tol = kDefaultPeripheralTol;
  unsigned limit_n = 10000;

  auto load_kernel = [&] { return io::kernel_from_json(io::read_json_file(kernel_file)); };

  auto* decompose_cmd = app.add_subcommand("decompose", "Ergodic classes, invariant measures, absorption probabilities");
  decompose_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  decompose_cmd->callback([&] {
    action = [&] { return Emitted{dump(io::to_json(decompose(load_kernel()))), "decompose.json"}; };
  });

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Peripheral spectrum, projections and residual");
  spectrum_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  spectrum_cmd->add_option("--tol", tol, "Peripheral classification tolerance")->capture_default_str();
  spectrum_cmd->callback([&] {
    action = [&] { return Emitted{dump(io::to_json(compute_split(load_kernel(), tol))), "spectrum.json"}; };
  });

  auto* limit_cmd = app.add_subcommand("limit", "Long-run limit of an initial measure");
  limit_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  limit_cmd->add_option("--measure", measure_file, "Initial probability measure JSON")->required();
  limit_cmd->add_option("--n", limit_n, "Cesaro horizon for the cross-check")->capture_default_str()->check(CLI::PositiveNumber);
  limit_cmd->callback([&] {
    action = [&] {
      const MarkovKernel kernel = load_kernel();
      const SignedMeasure mu = io::measure_from_json(io::read_json_file(measure_file), kernel.space());
      const ErgodicDecomposition decomp = decompose(kernel);
      const SignedMeasure limit = limit_of_initial_measure(decomp, mu);
      Vector iterate = mu.weights();
      Vector sum = Vector::Zero(iterate.size());
      for (unsigned i = 0; i < limit_n; ++i) {
        sum += iterate;
        iterate = kernel.matrix().transpose() * iterate;
      }
      json j = io::to_json(limit);
      j["coefficients"] = limit_coefficients(decomp, mu);
      j["cesaro_n"] = limit_n;
      j["cesaro_variation_distance"] = variation_distance(sum / static_cast<double>(limit_n), limit.weights());
      return Emitted{dump(j), "limit.json"};
    };
  });

  auto* check_cmd = app.add_subcommand("check", "Sufficient-condition checks (exit 3 when not satisfied)");
  check_cmd->require_subcommand(1);

  auto* doeblin_cmd = check_cmd->add_subcommand("doeblin", "One-step uniform minorization");
  doeblin_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  doeblin_cmd->callback([&] { action = [&] { return report_output(check_doeblin(load_kernel()), "check-doeblin.json"); }; });

  unsigned k_max = 16;
  auto* harris_cmd = check_cmd->add_subcommand("harris", "Finite hitting times of K and k-step minorization on K");
  harris_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  harris_cmd->add_option("--K", subset, "Comma-separated state labels")->required()->delimiter(',');
  harris_cmd->add_option("--k-max", k_max, "Largest k searched")->capture_default_str()->check(CLI::PositiveNumber);
  harris_cmd->callback([&] {
    action = [&] { return report_output(check_harris(load_kernel(), subset, k_max), "check-harris.json"); };
  });

  std::string x_star;
  double eps = 0.5;
  unsigned steps = 1;
  auto* qscc_cmd = check_cmd->add_subcommand("qscc", "||P^n - eps^n delta_x*|| < 1");
  qscc_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  qscc_cmd->add_option("--x-star", x_star, "Collapse state label")->required();
  qscc_cmd->add_option("--eps", eps, "eps in (0, 1]")->capture_default_str();
  qscc_cmd->add_option("--n", steps, "Step count")->capture_default_str()->check(CLI::PositiveNumber);
  qscc_cmd->callback([&] {
    action = [&] { return report_output(check_qscc_witness(load_kernel(), x_star, eps, steps), "check-qscc.json"); };
  });

  unsigned n_max = 0;
  auto* t2_cmd = check_cmd->add_subcommand("theorem2", "Range / collapsing shock / uniform shock bound on an economy model");
  t2_cmd->add_option("--model", model_file, "Model JSON")->required();
  t2_cmd->add_option("--n-max", n_max, "Largest iteration count searched (0 = number of states)")->capture_default_str();
  t2_cmd->callback([&] {
    action = [&] {
      return report_output(check_theorem2(io::model_from_json(io::read_json_file(model_file)), n_max), "check-theorem2.json");
    };
  });

  auto* verdict_cmd = check_cmd->add_subcommand("verdict", "Full ergodicity pipeline on an economy model");
  verdict_cmd->add_option("--model", model_file, "Model JSON")->required();
  verdict_cmd->add_option("--n-max", n_max, "Largest iteration count searched (0 = number of states)")->capture_default_str();
  verdict_cmd->callback([&] {
    action = [&] {
      const auto verdict = ergodicity_verdict(io::model_from_json(io::read_json_file(model_file)), n_max);
      return Emitted{dump(io::to_json(verdict)), "check-verdict.json", verdict.satisfied ? kOk : kNotSatisfied};
    };
  });

  auto* ui_cmd = check_cmd->add_subcommand("ui", "Uniform integrability of a discretized density");
  ui_cmd->add_option("--density", density_file, "Density JSON")->required();
  ui_cmd->callback([&] {
    action = [&] {
      const auto in = io::density_from_json(io::read_json_file(density_file));
      return report_output(check_uniform_integrability(in.density, in.cell_weights, in.eps), "check-ui.json");
    };
  });

  auto* induce_cmd = app.add_subcommand("induce", "Induced state-space kernel of an economy model");
  induce_cmd->add_option("--model", model_file, "Model JSON")->required();
  induce_cmd->callback([&] {
    action = [&] {
      return Emitted{dump(io::to_json(induce_kernel(io::model_from_json(io::read_json_file(model_file))))), "induce.json"};
    };
  });

  auto* trace_cmd = app.add_subcommand("trace", "Chain watched on a subset K");
  trace_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  trace_cmd->add_option("--K", subset, "Comma-separated state labels")->required()->delimiter(',');
  trace_cmd->callback([&] {
    action = [&] { return Emitted{dump(io::to_json(trace_chain(load_kernel(), subset).kernel_k)), "trace.json"}; };
  });

  std::size_t length = 100000;
  std::uint64_t seed = 0;
  unsigned runs = 1;
  std::string dump_paths;
  auto* simulate_cmd = app.add_subcommand("simulate", "Seeded paths and empirical time averages (CSV)");
  simulate_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  simulate_cmd->add_option("--x0", x0_label, "Initial state label")->required();
  simulate_cmd->add_option("--n", length, "Path length")->capture_default_str()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", seed, "First seed")->capture_default_str();
  simulate_cmd->add_option("--runs", runs, "Number of runs (seeds seed, seed+1, ...)")->capture_default_str()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--observable", observable_file, "Observable JSON");
  simulate_cmd->add_option("--indicator", indicator, "Use the indicator of this state as observable");
  simulate_cmd->add_option("--dump-paths", dump_paths, "Write paths as integer sequences to this file");
  simulate_cmd->callback([&] {
    action = [&] {
      const MarkovKernel kernel = load_kernel();
      const Observable g = load_observable(kernel, observable_file, indicator);
      const std::size_t x0 = kernel.space().index_of(x0_label);
      std::ostringstream csv, paths;
      csv << "seed,n,estimate,stderr\n";
      for (unsigned r = 0; r < runs; ++r) {
        const auto run_seed = seed + r;
        const SimulationRun sim = simulate_path(kernel, x0, length, run_seed);
        const double estimate = empirical_time_average(sim, g);
        const double se = std::sqrt(empirical_variance(sim, g) / static_cast<double>(length));
        csv << run_seed << ',' << length << ',' << csv_number(estimate) << ',' << csv_number(se) << '\n';
        if (!dump_paths.empty()) {
          for (std::size_t i = 0; i < sim.path.size(); ++i) paths << (i ? " " : "") << sim.path[i];
          paths << '\n';
        }
      }
      if (!dump_paths.empty()) io::write_file_atomic(dump_paths, paths.str());
      return Emitted{csv.str(), "simulate.csv"};
    };
  });

  std::vector<unsigned> grid{100, 1000, 10000};
  auto* profile_cmd = app.add_subcommand("profile", "Deviation of exact time averages from the space average (CSV)");
  profile_cmd->add_option("--kernel", kernel_file, "Kernel JSON")->required();
  profile_cmd->add_option("--x0", x0_label, "Starting state label")->required();
  profile_cmd->add_option("--observable", observable_file, "Observable JSON");
  profile_cmd->add_option("--indicator", indicator, "Use the indicator of this state as observable");
  profile_cmd->add_option("--grid", grid, "Comma-separated horizons")->delimiter(',')->capture_default_str();
  profile_cmd->callback([&] {
    action = [&] {
      const MarkovKernel kernel = load_kernel();
      const Observable g = load_observable(kernel, observable_file, indicator);
      const auto profile = convergence_profile(kernel, g, kernel.space().index_of(x0_label), grid);
      std::ostringstream csv;
      csv << "n,deviation,scaled_deviation\n";
      for (const auto& row : profile.rows)
        csv << row.n << ',' << csv_number(row.deviation) << ',' << csv_number(row.scaled) << '\n';
      return Emitted{csv.str(), "profile.csv"};
    };
  });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (!action) throw InvalidInput("no command given");
    const Emitted emitted = action();
    std::string target = output;
    if (target.empty()) {
      if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
        target = (std::filesystem::path(dir) / emitted.default_name).string();
    }
    if (target.empty())
      out << emitted.text;
    else
      io::write_file_atomic(target, emitted.text);
    return emitted.code;
  } catch (const NumericalDegeneracy& e) {
    err << "numerical degeneracy: " << e.what() << "\n";
    return kDegenerate;
  } catch (const InvalidInput& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const io::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}

}  // namespace ergodic::cli
