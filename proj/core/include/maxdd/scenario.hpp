// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_SCENARIO_HPP
#define MAXDD_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>
#include "maxdd/solver.hpp"

namespace maxdd
{

// Malformed or inconsistent run configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error
{
public:
  ConfigError(const std::string &msg, int line = 0);
  int line() const { return line_; }

private:
  int line_;
};

enum class CoefficientPattern
{
  Uniform,
  Layers,
  Holes
};

struct ScenarioConfig
{
  std::string name = "custom";

  // Geometry. length 0 means weak scaling: L = max(1, N / 2).
  int length = 0;
  double h = 0.125;
  bool holes = false;
  double hole_size = 0.125;
  std::string bc = "all-dirichlet";

  // With Layers or Holes the eps/mu values are the alternate or hole-located values; the rest
  // of the beam keeps eps = mu = 1. Every (eps, mu) pair is run.
  CoefficientPattern pattern = CoefficientPattern::Uniform;
  std::vector<double> eps{1.0};
  std::vector<double> mu{1.0};
  std::vector<double> gamma{1e-3};

  std::vector<int> subdomains{2, 4, 8};
  std::string partition = "strips";
  int overlap = 1;
  double tau = 10.0;
  double delta = 1e-12;
  std::vector<Method> methods{Method::AS, Method::ASSNK, Method::ASSNKGenEO, Method::ASNK,
                              Method::ASNKGenEO};
  std::vector<Method> required{Method::ASSNKGenEO};

  GmresOptions solver;
  bool spectrum = false;
  int dense_limit = 4000;
  std::uint64_t seed = 1;

  BeamGeometry geometry(int num_subdomains) const;
  void validate() const;
};

ScenarioConfig parse_config(std::string_view yaml_text);
ScenarioConfig load_config(const std::string &path);

// Built-in scenarios, sized to run on a desktop.
const std::vector<std::string> &preset_names();
bool is_preset(std::string_view name);
std::string preset_yaml(std::string_view name);
ScenarioConfig preset(std::string_view name);

// Coefficient field of one (eps, mu, gamma) tuple on the beam built for N subdomains.
CoefficientField build_coefficients(const ScenarioConfig &config, const Mesh &mesh,
                                    int num_subdomains, double eps, double mu, double gamma);

// Everything the methods of one (N, gamma, eps, mu) tuple share. Local problems point into
// decomp, so the struct moves but never copies.
struct ScenarioSetup
{
  DiscreteProblem problem;
  OverlappingDecomposition decomp;
  PartitionOfUnity pou;
  DDConstants constants;
  std::vector<LocalProblem> locals;
  double seconds = 0.0;

  ScenarioSetup() = default;
  ScenarioSetup(ScenarioSetup &&) = default;
  ScenarioSetup &operator=(ScenarioSetup &&) = default;
  ScenarioSetup(const ScenarioSetup &) = delete;
  ScenarioSetup &operator=(const ScenarioSetup &) = delete;
};

ScenarioSetup build_setup(const ScenarioConfig &config, int num_subdomains, double gamma,
                          double eps, double mu, int threads = 1);

// Empty for AS and the identity. `geneo` is only read by the GenEO variants.
CoarseSpace build_coarse_space(Method method, const ScenarioSetup &setup,
                               const std::vector<GenEOResult> &geneo = {});

struct ResultRow
{
  std::string scenario;
  std::string method;
  int N = 0;
  double gamma = 0.0;
  double eps = 1.0;
  double mu = 1.0;
  int dofs = 0;
  int nk = 0;
  int snk = 0;
  int geneo = 0;
  int iters = 0;
  bool converged = false;
  double kappa = -1.0;  // negative when not estimated
  double setup_s = 0.0;
  double solve_s = 0.0;

  // Not serialized.
  int k0 = 0;
  int k1 = 0;
  double tau = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::string error;
};

struct RunOptions
{
  int threads = 1;
  bool deterministic = false;
  // Estimate the spectrum of every AS-SNK-GenEO row even when the config does not ask for it.
  bool verify_bounds = false;
};

std::vector<ResultRow> run_scenario(const ScenarioConfig &config, const RunOptions &opts = {});

// Sorted by (scenario, method order, N, gamma, eps, mu).
void sort_rows(std::vector<ResultRow> &rows);

inline constexpr std::string_view kCsvHeader =
    "scenario,method,N,gamma,eps,mu,dofs,nk,snk,geneo,iters,converged,kappa,setup_s,solve_s";

void write_csv(const std::vector<ResultRow> &rows, std::ostream &out);
std::vector<ResultRow> parse_csv(std::istream &in);
// Methods as rows, the varying parameter (N, gamma, eps or mu) as columns.
void write_text(const std::vector<ResultRow> &rows, std::ostream &out);

struct BoundCheck
{
  std::string scenario;
  std::string method;
  int N = 0;
  double gamma = 0.0;
  double kappa = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool ok = false;
};

struct BoundReport
{
  std::vector<BoundCheck> checks;
  bool all_ok() const;
};

// Checks lambda_max <= k0, lambda_min >= 1 / (1 + k1 tau) and kappa <= (1 + k1 tau) k0 for
// every AS-SNK-GenEO row carrying a spectrum estimate. Other methods are not covered.
BoundReport verify_bounds(const std::vector<ResultRow> &rows, double tol = 1e-6);

}  // namespace maxdd

#endif  // MAXDD_SCENARIO_HPP
