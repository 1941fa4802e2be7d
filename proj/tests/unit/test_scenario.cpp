// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <fstream>
#include <sstream>
#include "maxdd/scenario.hpp"

#ifndef MAXDD_SOURCE_DIR
#error "MAXDD_SOURCE_DIR must point at the source tree"
#endif

namespace maxdd
{
namespace
{

int error_line(const std::string &yaml)
{
  try
  {
    (void)parse_config(yaml);
  }
  catch (const ConfigError &e)
  {
    return e.line();
  }
  return -1;
}

TEST(Config, ParsesEveryField)
{
  const auto c = parse_config(R"(name: demo
geometry: {length: 2, h: 0.125, holes: true, hole_size: 0.125}
bc: mixed-lateral
coefficients: {pattern: layers, eps: [1, 10], mu: 3}
gamma: [1.0e-3, 1]
subdomains: [2, 4]
partition: rcb
overlap: 2
tau: 5
delta: 0
methods: [AS, AS-NK-GenEO]
required: []
solver: {tol: 1.0e-8, max_iterations: 50, restart: 10}
spectrum: true
dense_limit: 100
seed: 7
)");
  EXPECT_EQ(c.name, "demo");
  EXPECT_EQ(c.length, 2);
  EXPECT_EQ(c.h, 0.125);
  EXPECT_TRUE(c.holes);
  EXPECT_EQ(c.bc, "mixed-lateral");
  EXPECT_EQ(c.pattern, CoefficientPattern::Layers);
  EXPECT_EQ(c.eps, (std::vector<double>{1.0, 10.0}));
  EXPECT_EQ(c.mu, (std::vector<double>{3.0}));
  EXPECT_EQ(c.gamma, (std::vector<double>{1e-3, 1.0}));
  EXPECT_EQ(c.subdomains, (std::vector<int>{2, 4}));
  EXPECT_EQ(c.partition, "rcb");
  EXPECT_EQ(c.overlap, 2);
  EXPECT_EQ(c.tau, 5.0);
  EXPECT_EQ(c.delta, 0.0);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::AS, Method::ASNKGenEO}));
  EXPECT_TRUE(c.required.empty());
  EXPECT_EQ(c.solver.max_iterations, 50);
  EXPECT_EQ(c.solver.restart, 10);
  EXPECT_TRUE(c.spectrum);
  EXPECT_EQ(c.dense_limit, 100);
  EXPECT_EQ(c.seed, 7u);
}

TEST(Config, ErrorsCarryLineNumbers)
{
  EXPECT_EQ(error_line("name: x\nbogus: 1\n"), 2);
  EXPECT_EQ(error_line("name: x\ngeometry:\n  h: 0.1\n  width: 3\n"), 4);
  EXPECT_EQ(error_line("gamma: [1, abc]\n"), 1);
  EXPECT_EQ(error_line("name: x\n\nmethods:\n  - AS\n  - AS-FOO\n"), 5);
  EXPECT_EQ(error_line("coefficients: {pattern: stripes}\n"), 1);
  EXPECT_EQ(error_line("gamma: [1, 2\n"), 2);
  EXPECT_THROW(parse_config("gamma: -1\n"), ConfigError);
  EXPECT_THROW(parse_config("subdomains: 0\n"), ConfigError);
  EXPECT_THROW(parse_config("bc: periodic\n"), ConfigError);
  EXPECT_THROW(parse_config("geometry: {h: 0.3}\n"), ConfigError);
  EXPECT_THROW(parse_config("geometry: {h: 0.25, holes: true}\n"), ConfigError);
  EXPECT_THROW(parse_config("geometry: {holes: true}\ncoefficients: {pattern: holes}\n"),
               ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
  EXPECT_THROW(preset("tab9"), ConfigError);
}

TEST(Config, EmptyMethodListRunsNothing)
{
  const auto c = parse_config("methods: []\nsubdomains: 2\n");
  EXPECT_TRUE(c.methods.empty());
  EXPECT_TRUE(run_scenario(c).empty());
}

TEST(Presets, ParseAndMatchShippedConfigs)
{
  ASSERT_EQ(preset_names().size(), 9u);
  for (const auto &name : preset_names())
  {
    const auto c = preset(name);
    EXPECT_EQ(c.name, name);
    std::ifstream in(std::string(MAXDD_SOURCE_DIR) + "/configs/" + name + ".yaml");
    ASSERT_TRUE(in) << name;
    // Shipped files carry a license comment on top of the preset text.
    std::string line, body;
    while (std::getline(in, line))
    {
      if (!line.empty() && line[0] != '#')
      {
        body += line + '\n';
      }
    }
    std::string expected;
    std::stringstream ps(preset_yaml(name));
    while (std::getline(ps, line))
    {
      if (!line.empty())
      {
        expected += line + '\n';
      }
    }
    EXPECT_EQ(body, expected) << name;
  }
  const auto g = preset("tab_gamma");
  EXPECT_EQ(g.gamma.size(), 8u);
  EXPECT_EQ(preset("tab4").partition, "rcb");
}

ResultRow row(const std::string &method, int n, double gamma, int iters)
{
  ResultRow r;
  r.scenario = "s";
  r.method = method;
  r.N = n;
  r.gamma = gamma;
  r.dofs = 100 * n;
  r.nk = 10;
  r.iters = iters;
  r.converged = true;
  r.setup_s = 0.5;
  r.solve_s = 0.25;
  return r;
}

TEST(Report, CsvRoundTripAndOrder)
{
  std::vector<ResultRow> rows = {row("AS-SNK-GenEO", 4, 1e-3, 7), row("AS", 2, 1e-3, 30),
                                 row("AS-SNK", 2, 1e-5, 12), row("AS", 2, 1e-5, 40)};
  rows[0].kappa = 3.5;
  sort_rows(rows);
  EXPECT_EQ(rows[0].method, "AS");
  EXPECT_EQ(rows[0].gamma, 1e-5);
  EXPECT_EQ(rows[3].method, "AS-SNK-GenEO");

  std::stringstream ss;
  write_csv(rows, ss);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  EXPECT_EQ(header, kCsvHeader);
  const auto back = parse_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k)
  {
    EXPECT_EQ(back[k].method, rows[k].method);
    EXPECT_EQ(back[k].N, rows[k].N);
    EXPECT_EQ(back[k].gamma, rows[k].gamma);
    EXPECT_EQ(back[k].iters, rows[k].iters);
    EXPECT_EQ(back[k].kappa, rows[k].kappa);
    EXPECT_EQ(back[k].solve_s, rows[k].solve_s);
  }
  std::stringstream bad("scenario,method\n");
  EXPECT_THROW(parse_csv(bad), std::runtime_error);
}

TEST(Report, TextLayoutPutsMethodsInRows)
{
  std::vector<ResultRow> rows = {row("AS", 2, 1e-3, 30), row("AS", 4, 1e-3, 45),
                                 row("AS-SNK-GenEO", 2, 1e-3, 7),
                                 row("AS-SNK-GenEO", 4, 1e-3, 8)};
  rows[1].converged = false;
  std::stringstream ss;
  write_text(rows, ss);
  const auto text = ss.str();
  EXPECT_NE(text.find("N "), std::string::npos);
  EXPECT_NE(text.find("45*"), std::string::npos);
  EXPECT_NE(text.find("not converged"), std::string::npos);
  EXPECT_LT(text.find("\nAS "), text.find("\nAS-SNK-GenEO "));
  EXPECT_NE(text.find("GenEO size"), std::string::npos);
}

TEST(Report, BoundCheckArithmetic)
{
  ResultRow r = row("AS-SNK-GenEO", 4, 1e-3, 7);
  r.k0 = 3;
  r.k1 = 2;
  r.tau = 10.0;
  r.lambda_max = 2.9;
  r.lambda_min = 0.1;
  r.kappa = 29.0;
  ResultRow as = row("AS", 4, 1e-3, 50);
  as.kappa = 1e6;
  auto rep = verify_bounds({r, as});
  ASSERT_EQ(rep.checks.size(), 1u);
  EXPECT_EQ(rep.checks[0].bound, 63.0);
  EXPECT_TRUE(rep.all_ok());

  r.lambda_min = 1.0 / 21.0 - 1e-3;
  EXPECT_FALSE(verify_bounds({r}).all_ok());
  r.lambda_min = 0.1;
  r.lambda_max = 3.01;
  EXPECT_FALSE(verify_bounds({r}).all_ok());
  r.kappa = -1.0;
  EXPECT_TRUE(verify_bounds({r}).checks.empty());
}

TEST(Run, SmallScenarioEndToEnd)
{
  auto c = parse_config(R"(name: small
geometry: {length: 1, h: 0.25}
subdomains: [2]
methods: [AS, AS-SNK-GenEO]
spectrum: true
)");
  RunOptions opts;
  opts.deterministic = true;
  const auto rows = run_scenario(c, opts);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto &r : rows)
  {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.setup_s, 0.0);
    EXPECT_GT(r.kappa, 1.0);
  }
  EXPECT_EQ(rows[1].geneo, 0);
  EXPECT_GT(rows[1].snk, 0);
  EXPECT_TRUE(verify_bounds(rows).all_ok());

  std::stringstream a, b;
  write_csv(rows, a);
  write_csv(run_scenario(c, opts), b);
  EXPECT_EQ(a.str(), b.str());

  // Subdomain sums run in a fixed order whatever the worker count.
  std::stringstream t;
  opts.threads = 2;
  write_csv(run_scenario(c, opts), t);
  EXPECT_EQ(a.str(), t.str());
}

}  // namespace
}  // namespace maxdd
