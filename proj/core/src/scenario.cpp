// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "maxdd/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <yaml-cpp/yaml.h>

namespace maxdd
{

ConfigError::ConfigError(const std::string &msg, int line)
  : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line)
{
}

BeamGeometry ScenarioConfig::geometry(int num_subdomains) const
{
  BeamGeometry g;
  g.length = length > 0 ? length : std::max(1, num_subdomains / 2);
  g.h = h;
  if (holes)
  {
    g.holes = HoleSpec::standard();
    for (auto &s : g.holes.longitudinal)
    {
      s.size = hole_size;
    }
    g.holes.transverse_size = hole_size;
  }
  return g;
}

void ScenarioConfig::validate() const
{
  auto fail = [](const std::string &m) { throw ConfigError(m); };
  if (length < 0)
  {
    fail("geometry.length must be >= 0");
  }
  if (eps.empty() || mu.empty() || gamma.empty() || subdomains.empty())
  {
    fail("eps, mu, gamma and subdomains lists must be nonempty");
  }
  for (double v : eps)
  {
    if (!(v > 0.0) || !std::isfinite(v))
    {
      fail("eps values must be positive");
    }
  }
  for (double v : mu)
  {
    if (!(v > 0.0) || !std::isfinite(v))
    {
      fail("mu values must be positive");
    }
  }
  for (double v : gamma)
  {
    if (!(v > 0.0) || !std::isfinite(v))
    {
      fail("gamma values must be positive");
    }
  }
  for (int n : subdomains)
  {
    if (n < 1)
    {
      fail("subdomain counts must be >= 1");
    }
  }
  if (overlap < 1)
  {
    fail("overlap must be at least one layer");
  }
  if (!(tau > 0.0))
  {
    fail("tau must be positive");
  }
  if (!(delta >= 0.0))
  {
    fail("delta must be nonnegative");
  }
  if (!(solver.tol > 0.0) || solver.max_iterations < 1 || solver.restart < 0)
  {
    fail("solver settings out of range");
  }
  if (pattern == CoefficientPattern::Holes && holes)
  {
    fail("hole-located coefficients need a beam without carved holes");
  }
  try
  {
    (void)BCSpec::from_name(bc);
    (void)partition_kind_from_name(partition);
    geometry(subdomains.front()).validate();
  }
  catch (const std::invalid_argument &e)
  {
    fail(e.what());
  }
}

namespace
{

int line_of(const YAML::Node &n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <typename T>
T scalar(const YAML::Node &n, const std::string &key)
{
  if (!n.IsScalar())
  {
    throw ConfigError("'" + key + "' must be a scalar", line_of(n));
  }
  try
  {
    return n.as<T>();
  }
  catch (const YAML::Exception &)
  {
    throw ConfigError("'" + key + "' has an invalid value '" + n.Scalar() + "'", line_of(n));
  }
}

template <typename T>
std::vector<T> scalar_list(const YAML::Node &n, const std::string &key)
{
  std::vector<T> out;
  if (n.IsSequence())
  {
    for (const auto &item : n)
    {
      out.push_back(scalar<T>(item, key));
    }
  }
  else
  {
    out.push_back(scalar<T>(n, key));
  }
  return out;
}

std::vector<Method> method_list(const YAML::Node &n, const std::string &key)
{
  std::vector<Method> out;
  if (n.IsNull())
  {
    return out;
  }
  const auto names = scalar_list<std::string>(n, key);
  std::size_t k = 0;
  for (const auto &name : names)
  {
    try
    {
      out.push_back(method_from_name(name));
    }
    catch (const std::invalid_argument &e)
    {
      throw ConfigError(e.what(), line_of(n.IsSequence() ? n[k] : n));
    }
    ++k;
  }
  return out;
}

void check_keys(const YAML::Node &map, const std::set<std::string> &allowed,
                const std::string &section)
{
  if (!map.IsMap())
  {
    throw ConfigError("'" + section + "' must be a mapping", line_of(map));
  }
  for (const auto &kv : map)
  {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
    {
      throw ConfigError("unknown key '" + key + "' in " + section, line_of(kv.first));
    }
  }
}

CoefficientPattern pattern_from_name(const YAML::Node &n)
{
  const auto name = scalar<std::string>(n, "coefficients.pattern");
  if (name == "uniform")
  {
    return CoefficientPattern::Uniform;
  }
  if (name == "layers")
  {
    return CoefficientPattern::Layers;
  }
  if (name == "holes")
  {
    return CoefficientPattern::Holes;
  }
  throw ConfigError("unknown coefficient pattern '" + name + "'", line_of(n));
}

}  // namespace

ScenarioConfig parse_config(std::string_view yaml_text)
{
  YAML::Node root;
  try
  {
    root = YAML::Load(std::string(yaml_text));
  }
  catch (const YAML::ParserException &e)
  {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  ScenarioConfig c;
  if (root.IsNull())
  {
    c.validate();
    return c;
  }
  check_keys(root,
             {"name", "geometry", "bc", "coefficients", "gamma", "subdomains", "partition",
              "overlap", "tau", "delta", "methods", "required", "solver", "spectrum",
              "dense_limit", "seed"},
             "config");
  if (auto n = root["name"])
  {
    c.name = scalar<std::string>(n, "name");
  }
  if (auto g = root["geometry"])
  {
    check_keys(g, {"length", "h", "holes", "hole_size"}, "geometry");
    if (g["length"])
    {
      c.length = scalar<int>(g["length"], "geometry.length");
    }
    if (g["h"])
    {
      c.h = scalar<double>(g["h"], "geometry.h");
    }
    if (g["holes"])
    {
      c.holes = scalar<bool>(g["holes"], "geometry.holes");
    }
    if (g["hole_size"])
    {
      c.hole_size = scalar<double>(g["hole_size"], "geometry.hole_size");
    }
  }
  if (auto n = root["bc"])
  {
    c.bc = scalar<std::string>(n, "bc");
  }
  if (auto co = root["coefficients"])
  {
    check_keys(co, {"pattern", "eps", "mu"}, "coefficients");
    if (co["pattern"])
    {
      c.pattern = pattern_from_name(co["pattern"]);
    }
    if (co["eps"])
    {
      c.eps = scalar_list<double>(co["eps"], "coefficients.eps");
    }
    if (co["mu"])
    {
      c.mu = scalar_list<double>(co["mu"], "coefficients.mu");
    }
  }
  if (auto n = root["gamma"])
  {
    c.gamma = scalar_list<double>(n, "gamma");
  }
  if (auto n = root["subdomains"])
  {
    c.subdomains = scalar_list<int>(n, "subdomains");
  }
  if (auto n = root["partition"])
  {
    c.partition = scalar<std::string>(n, "partition");
  }
  if (auto n = root["overlap"])
  {
    c.overlap = scalar<int>(n, "overlap");
  }
  if (auto n = root["tau"])
  {
    c.tau = scalar<double>(n, "tau");
  }
  if (auto n = root["delta"])
  {
    c.delta = scalar<double>(n, "delta");
  }
  if (auto n = root["methods"])
  {
    c.methods = method_list(n, "methods");
  }
  if (auto n = root["required"])
  {
    c.required = method_list(n, "required");
  }
  if (auto s = root["solver"])
  {
    check_keys(s, {"tol", "max_iterations", "restart"}, "solver");
    if (s["tol"])
    {
      c.solver.tol = scalar<double>(s["tol"], "solver.tol");
    }
    if (s["max_iterations"])
    {
      c.solver.max_iterations = scalar<int>(s["max_iterations"], "solver.max_iterations");
    }
    if (s["restart"])
    {
      c.solver.restart = scalar<int>(s["restart"], "solver.restart");
    }
  }
  if (auto n = root["spectrum"])
  {
    c.spectrum = scalar<bool>(n, "spectrum");
  }
  if (auto n = root["dense_limit"])
  {
    c.dense_limit = scalar<int>(n, "dense_limit");
  }
  if (auto n = root["seed"])
  {
    c.seed = scalar<std::uint64_t>(n, "seed");
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot read config file " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace
{

const std::map<std::string, std::string, std::less<>> &preset_table()
{
  static const std::map<std::string, std::string, std::less<>> table = {
      {"tab1", R"(name: tab1
geometry: {h: 0.125, holes: false}
bc: all-dirichlet
coefficients: {pattern: uniform}
gamma: 1.0e-3
subdomains: [2, 4, 8]
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab2", R"(name: tab2
geometry: {h: 0.125, holes: false}
bc: mixed-lateral
coefficients: {pattern: uniform}
gamma: 1.0e-3
subdomains: [2, 4, 8]
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab3", R"(name: tab3
geometry: {h: 0.125, holes: true}
bc: mixed-lateral
coefficients: {pattern: uniform}
gamma: 1.0e-3
subdomains: [2, 4, 8]
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab4", R"(name: tab4
geometry: {length: 4, h: 0.125, holes: true}
bc: mixed-lateral
coefficients: {pattern: uniform}
gamma: 1.0e-3
subdomains: [2, 4, 8]
partition: rcb
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab_gamma", R"(name: tab_gamma
geometry: {length: 4, h: 0.125, holes: true}
bc: mixed-lateral
coefficients: {pattern: uniform}
gamma: [1.0e-5, 1.0e-4, 1.0e-3, 1.0e-2, 1.0e-1, 1, 10, 100]
subdomains: 8
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab_eps_layers", R"(name: tab_eps_layers
geometry: {length: 4, h: 0.125, holes: false}
bc: mixed-lateral
coefficients: {pattern: layers, eps: [1.0e-4, 1.0e-3, 1.0e-2, 1.0e-1, 1, 10, 100, 1000, 1.0e+4]}
gamma: 1.0e-3
subdomains: 8
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab_mu_layers", R"(name: tab_mu_layers
geometry: {length: 4, h: 0.125, holes: false}
bc: mixed-lateral
coefficients: {pattern: layers, mu: [1.0e-4, 1.0e-3, 1.0e-2, 1.0e-1, 1, 10, 100, 1000, 1.0e+4]}
gamma: 1.0e-3
subdomains: 8
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab_eps_holes", R"(name: tab_eps_holes
geometry: {length: 4, h: 0.125, holes: false}
bc: mixed-lateral
coefficients: {pattern: holes, eps: [1.0e-4, 1.0e-3, 1.0e-2, 1.0e-1, 1, 10, 100, 1000, 1.0e+4]}
gamma: 1.0e-3
subdomains: 8
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
      {"tab_mu_holes", R"(name: tab_mu_holes
geometry: {length: 4, h: 0.125, holes: false}
bc: mixed-lateral
coefficients: {pattern: holes, mu: [1.0e-4, 1.0e-3, 1.0e-2, 1.0e-1, 1, 10, 100, 1000, 1.0e+4]}
gamma: 1.0e-3
subdomains: 8
methods: [AS, AS-SNK, AS-SNK-GenEO, AS-NK, AS-NK-GenEO]
)"},
  };
  return table;
}

}  // namespace

const std::vector<std::string> &preset_names()
{
  static const std::vector<std::string> names = {"tab1",          "tab2",          "tab3",
                                                 "tab4",          "tab_gamma",     "tab_eps_layers",
                                                 "tab_mu_layers", "tab_eps_holes", "tab_mu_holes"};
  return names;
}

bool is_preset(std::string_view name) { return preset_table().count(name) > 0; }

std::string preset_yaml(std::string_view name)
{
  const auto it = preset_table().find(name);
  if (it == preset_table().end())
  {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return it->second;
}

ScenarioConfig preset(std::string_view name) { return parse_config(preset_yaml(name)); }

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void run_tuple(const ScenarioConfig &c, const RunOptions &opts, int n_sub, double gamma,
               double eps, double mu, std::vector<ResultRow> &rows)
{
  std::vector<ResultRow> tuple_rows;
  for (Method m : c.methods)
  {
    ResultRow r;
    r.scenario = c.name;
    r.method = std::string(method_name(m));
    r.N = n_sub;
    r.gamma = gamma;
    r.eps = eps;
    r.mu = mu;
    r.tau = c.tau;
    tuple_rows.push_back(r);
  }
  auto fail_all = [&](const std::string &msg)
  {
    for (auto &r : tuple_rows)
    {
      r.error = msg;
      rows.push_back(r);
    }
  };

  ScenarioSetup s;
  try
  {
    s = build_setup(c, n_sub, gamma, eps, mu, opts.threads);
  }
  catch (const std::exception &e)
  {
    fail_all(e.what());
    return;
  }

  const int n = s.problem.num_dofs();
  bool need_geneo = false;
  for (Method m : c.methods)
  {
    need_geneo = need_geneo || uses_geneo(m);
  }
  std::vector<GenEOResult> geneo;
  double geneo_seconds = 0.0;
  std::string geneo_error;
  if (need_geneo)
  {
    const auto t0 = Clock::now();
    try
    {
      geneo = solve_geneo(s.locals, c.tau, c.delta, opts.threads);
    }
    catch (const std::exception &e)
    {
      geneo_error = e.what();
    }
    geneo_seconds = seconds_since(t0);
  }

  for (std::size_t k = 0; k < c.methods.size(); ++k)
  {
    const Method m = c.methods[k];
    ResultRow &r = tuple_rows[k];
    r.dofs = n;
    r.k0 = s.constants.k0;
    r.k1 = s.constants.k1;
    try
    {
      if (uses_geneo(m) && !geneo_error.empty())
      {
        throw std::runtime_error(geneo_error);
      }
      const auto t0 = Clock::now();
      const CoarseKind kind = coarse_kind_of(m);
      const CoarseSpace coarse = build_coarse_space(m, s, geneo);
      r.setup_s = s.seconds + seconds_since(t0) + (uses_geneo(m) ? geneo_seconds : 0.0);
      r.nk = coarse.nk_size;
      r.snk = coarse.snk_size;
      r.geneo = coarse.geneo_size;

      const MatrixOperator a(s.problem.system);
      IdentityOperator identity(n);
      SchwarzPreconditioner schwarz(s.locals, kind == CoarseKind::None ? nullptr : &coarse, n,
                                    opts.threads);
      const LinearOperator &prec =
          m == Method::Identity ? static_cast<const LinearOperator &>(identity) : schwarz;
      const auto rep = gmres_solve(a, s.problem.rhs, prec, c.solver);
      r.iters = rep.iterations;
      r.converged = rep.converged;
      r.solve_s = rep.solve_seconds;
      if (c.spectrum || (opts.verify_bounds && m == Method::ASSNKGenEO))
      {
        SpectrumOptions so;
        so.dense_limit = c.dense_limit;
        so.seed = c.seed;
        const auto est = estimate_extremes(s.problem.system, prec, so);
        r.kappa = est.kappa;
        r.lambda_min = est.lambda_min;
        r.lambda_max = est.lambda_max;
      }
    }
    catch (const std::exception &e)
    {
      r.error = e.what();
      r.converged = false;
    }
    if (opts.deterministic)
    {
      r.setup_s = 0.0;
      r.solve_s = 0.0;
    }
    rows.push_back(r);
  }
}

}  // namespace

ScenarioSetup build_setup(const ScenarioConfig &c, int n_sub, double gamma, double eps, double mu,
                          int threads)
{
  ScenarioSetup s;
  const auto t0 = Clock::now();
  const auto geom = c.geometry(n_sub);
  Mesh mesh = build_beam_mesh(geom);
  auto coeff = build_coefficients(c, mesh, n_sub, eps, mu, gamma);
  s.problem = assemble_problem(std::move(mesh), BCSpec::from_name(c.bc), std::move(coeff));
  const auto own = partition(s.problem.mesh, partition_kind_from_name(c.partition), n_sub);
  s.decomp = extend_overlap(s.problem.mesh, own, s.problem.gradient.edge_dofs,
                            s.problem.gradient.node_dofs, c.overlap);
  s.pou = build_pou(s.decomp, s.problem.num_dofs());
  s.constants = compute_constants(s.problem.system, s.decomp, s.problem.mesh.num_hexes());
  s.locals = build_local_problems(s.problem, s.decomp, s.pou, threads);
  s.seconds = seconds_since(t0);
  return s;
}

CoarseSpace build_coarse_space(Method m, const ScenarioSetup &s,
                               const std::vector<GenEOResult> &geneo)
{
  const CoarseKind kind = coarse_kind_of(m);
  if (kind == CoarseKind::None)
  {
    return CoarseSpace{};
  }
  const int n = s.problem.num_dofs();
  std::vector<ColSparse> blocks;
  if (kind == CoarseKind::NK || kind == CoarseKind::NKGenEO)
  {
    blocks.push_back(build_nk(s.problem));
  }
  else
  {
    blocks.push_back(build_snk(s.locals, n));
  }
  if (uses_geneo(m))
  {
    if (geneo.size() != s.locals.size())
    {
      throw std::invalid_argument("GenEO results missing for a GenEO method");
    }
    blocks.push_back(build_geneo_columns(geneo, s.locals, n));
  }
  return assemble_coarse(kind, blocks, s.problem.system);
}

CoefficientField build_coefficients(const ScenarioConfig &c, const Mesh &mesh, int n_sub,
                                   double eps, double mu, double gamma)
{
  switch (c.pattern)
  {
    case CoefficientPattern::Uniform:
      return CoefficientField::uniform(mesh.num_hexes(), mu, eps, gamma);
    case CoefficientPattern::Layers:
      return layered_coefficients(mesh, eps, mu, gamma);
    case CoefficientPattern::Holes:
    {
      ScenarioConfig carved = c;
      carved.holes = true;
      return hole_valued_coefficients(mesh, carved.geometry(n_sub), eps, mu, gamma);
    }
  }
  return CoefficientField::uniform(mesh.num_hexes(), 1.0, 1.0, gamma);
}

std::vector<ResultRow> run_scenario(const ScenarioConfig &config, const RunOptions &opts)
{
  config.validate();
  std::vector<ResultRow> rows;
  if (config.methods.empty())
  {
    return rows;
  }
  for (int n_sub : config.subdomains)
  {
    for (double gamma : config.gamma)
    {
      for (double eps : config.eps)
      {
        for (double mu : config.mu)
        {
          run_tuple(config, opts, n_sub, gamma, eps, mu, rows);
        }
      }
    }
  }
  sort_rows(rows);
  return rows;
}

}  // namespace maxdd
