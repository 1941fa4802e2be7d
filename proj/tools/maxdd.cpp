// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <CLI11.hpp>
#include "maxdd/backend.hpp"
#include "maxdd/scenario.hpp"

namespace fs = std::filesystem;

namespace
{

enum ExitCode
{
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kBoundViolation = 3,
  kNotConverged = 4
};

maxdd::ScenarioConfig resolve(const std::string &config)
{
  if (maxdd::is_preset(config) && !fs::exists(config))
  {
    return maxdd::preset(config);
  }
  return maxdd::load_config(config);
}

void emit(const std::vector<maxdd::ResultRow> &rows, const std::string &format,
          const std::string &out_dir, const std::string &name)
{
  auto write = [&](std::ostream &os)
  {
    if (format == "csv")
    {
      maxdd::write_csv(rows, os);
    }
    else
    {
      maxdd::write_text(rows, os);
    }
  };
  if (out_dir.empty())
  {
    write(std::cout);
    return;
  }
  fs::create_directories(out_dir);
  const auto path = fs::path(out_dir) / (name + (format == "csv" ? ".csv" : ".txt"));
  std::ofstream os(path);
  if (!os)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  write(os);
  std::cerr << "wrote " << path.string() << '\n';
}

int run(const std::string &config, const std::string &out_dir, const std::string &format,
        bool verify, bool deterministic, int threads)
{
  const auto cfg = resolve(config);
  maxdd::RunOptions opts;
  opts.threads = threads;
  opts.deterministic = deterministic;
  opts.verify_bounds = verify;
  const auto rows = maxdd::run_scenario(cfg, opts);
  emit(rows, format, out_dir, cfg.name);

  for (const auto &r : rows)
  {
    if (!r.error.empty())
    {
      std::cerr << "error: " << r.method << " N=" << r.N << ": " << r.error << '\n';
    }
  }
  if (verify)
  {
    const auto report = maxdd::verify_bounds(rows);
    for (const auto &c : report.checks)
    {
      std::cerr << (c.ok ? "bound ok  " : "bound FAIL") << "  " << c.method << " N=" << c.N
                << " gamma=" << c.gamma << " kappa=" << c.kappa << " bound=" << c.bound
                << " margin=" << c.margin << '\n';
    }
    if (report.checks.empty())
    {
      std::cerr << "no AS-SNK-GenEO rows with a spectrum estimate to check\n";
    }
    if (!report.all_ok())
    {
      return kBoundViolation;
    }
  }
  for (const auto &r : rows)
  {
    for (auto m : cfg.required)
    {
      if (r.method == maxdd::method_name(m) && !r.converged)
      {
        std::cerr << "required method " << r.method << " did not converge (N=" << r.N
                  << ", gamma=" << r.gamma << ")\n";
        return kNotConverged;
      }
    }
  }
  return kOk;
}

int export_problem(const std::string &config, int n_sub, const std::string &out_dir)
{
  const auto cfg = resolve(config);
  const auto geom = cfg.geometry(n_sub);
  auto mesh = maxdd::build_beam_mesh(geom);
  const auto coeff = maxdd::build_coefficients(cfg, mesh, n_sub, cfg.eps.front(),
                                               cfg.mu.front(), cfg.gamma.front());
  fs::create_directories(out_dir);
  {
    std::ofstream listing(fs::path(out_dir) / "mesh.txt");
    maxdd::write_mesh_listing(mesh, listing);
  }
  const auto problem =
      maxdd::assemble_problem(std::move(mesh), maxdd::BCSpec::from_name(cfg.bc), coeff);
  const fs::path dir(out_dir);
  maxdd::write_matrix_market(problem.curl_curl, (dir / "K.mtx").string());
  maxdd::write_matrix_market(problem.mass, (dir / "M.mtx").string());
  maxdd::write_matrix_market(problem.system, (dir / "A.mtx").string());
  maxdd::write_matrix_market(problem.gradient.matrix, (dir / "C.mtx").string());
  std::cerr << "exported " << problem.num_dofs() << " dofs to " << out_dir << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char **argv)
{
  try
  {
    maxdd::ensure_dense_backend(argv);
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  CLI::App app{"Two-level Schwarz solvers for the positive Maxwell problem"};
  app.require_subcommand(1);

  std::string config, out_dir, format = "text";
  bool verify = false, deterministic = false;
  int threads = 1;
  auto *run_cmd = app.add_subcommand("run", "Run a scenario config file or preset");
  run_cmd->add_option("config", config, "YAML config path or preset name")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (default: stdout)");
  run_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "text"}));
  run_cmd->add_flag("--verify-bounds", verify,
                    "Estimate spectra of AS-SNK-GenEO and check the condition number bound");
  run_cmd->add_flag("--deterministic", deterministic,
                    "Zero the wall-clock columns so identical runs give identical bytes");
  run_cmd->add_option("--threads", threads, "Worker threads for subdomain work")
      ->check(CLI::PositiveNumber);

  std::string preset_name;
  auto *preset_cmd = app.add_subcommand("preset", "List presets or print one as YAML");
  preset_cmd->add_option("name", preset_name, "Preset name");

  std::string export_config, export_dir = "export";
  int export_n = 2;
  auto *export_cmd =
      app.add_subcommand("export", "Write the mesh listing and K, M, A, C in Matrix Market");
  export_cmd->add_option("config", export_config, "YAML config path or preset name")
      ->required();
  export_cmd->add_option("-N,--subdomains", export_n, "Subdomain count fixing the length")
      ->check(CLI::PositiveNumber);
  export_cmd->add_option("--out", export_dir, "Output directory");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try
  {
    if (*run_cmd)
    {
      return run(config, out_dir, format, verify, deterministic, threads);
    }
    if (*preset_cmd)
    {
      if (preset_name.empty())
      {
        for (const auto &n : maxdd::preset_names())
        {
          std::cout << n << '\n';
        }
      }
      else
      {
        std::cout << maxdd::preset_yaml(preset_name);
      }
      return kOk;
    }
    if (*export_cmd)
    {
      return export_problem(export_config, export_n, export_dir);
    }
  }
  catch (const maxdd::ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
