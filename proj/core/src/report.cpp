// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include "maxdd/scenario.hpp"

namespace maxdd
{

namespace
{

int method_rank(const std::string &name)
{
  try
  {
    return static_cast<int>(method_from_name(name));
  }
  catch (const std::invalid_argument &)
  {
    return 1000;
  }
}

std::string num(double v, const char *fmt = "%.10g")
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string &line)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ','))
  {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',')
  {
    out.emplace_back();
  }
  return out;
}

}  // namespace

void sort_rows(std::vector<ResultRow> &rows)
{
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow &a, const ResultRow &b)
                   {
                     return std::make_tuple(a.scenario, method_rank(a.method), a.method, a.N,
                                            a.gamma, a.eps, a.mu) <
                            std::make_tuple(b.scenario, method_rank(b.method), b.method, b.N,
                                            b.gamma, b.eps, b.mu);
                   });
}

void write_csv(const std::vector<ResultRow> &rows, std::ostream &out)
{
  out << kCsvHeader << '\n';
  for (const auto &r : rows)
  {
    out << r.scenario << ',' << r.method << ',' << r.N << ',' << num(r.gamma) << ','
        << num(r.eps) << ',' << num(r.mu) << ',' << r.dofs << ',' << r.nk << ',' << r.snk << ','
        << r.geneo << ',' << r.iters << ',' << (r.converged ? 1 : 0) << ','
        << (r.kappa >= 0.0 ? num(r.kappa) : std::string()) << ',' << num(r.setup_s, "%.6f")
        << ',' << num(r.solve_s, "%.6f") << '\n';
  }
}

std::vector<ResultRow> parse_csv(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
  {
    throw std::runtime_error("CSV header mismatch");
  }
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.empty())
    {
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 15)
    {
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 15 fields");
    }
    ResultRow r;
    try
    {
      r.scenario = f[0];
      r.method = f[1];
      r.N = std::stoi(f[2]);
      r.gamma = std::stod(f[3]);
      r.eps = std::stod(f[4]);
      r.mu = std::stod(f[5]);
      r.dofs = std::stoi(f[6]);
      r.nk = std::stoi(f[7]);
      r.snk = std::stoi(f[8]);
      r.geneo = std::stoi(f[9]);
      r.iters = std::stoi(f[10]);
      r.converged = f[11] == "1";
      r.kappa = f[12].empty() ? -1.0 : std::stod(f[12]);
      r.setup_s = std::stod(f[13]);
      r.solve_s = std::stod(f[14]);
    }
    catch (const std::logic_error &)
    {
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": malformed number");
    }
    rows.push_back(r);
  }
  return rows;
}

void write_text(const std::vector<ResultRow> &rows, std::ostream &out)
{
  std::map<std::string, std::vector<const ResultRow *>> by_scenario;
  for (const auto &r : rows)
  {
    by_scenario[r.scenario].push_back(&r);
  }
  bool first = true;
  for (const auto &[scenario, group] : by_scenario)
  {
    std::set<int> ns;
    std::set<double> gammas, epss, mus;
    for (const auto *r : group)
    {
      ns.insert(r->N);
      gammas.insert(r->gamma);
      epss.insert(r->eps);
      mus.insert(r->mu);
    }
    const bool vary_n = ns.size() > 1;
    const bool vary_g = gammas.size() > 1;
    const bool vary_e = epss.size() > 1;
    const bool vary_m = mus.size() > 1;
    const bool none = !vary_n && !vary_g && !vary_e && !vary_m;

    using Key = std::tuple<int, double, double, double>;
    auto key_of = [](const ResultRow *r) { return Key{r->N, r->gamma, r->eps, r->mu}; };
    auto label_of = [&](const Key &k)
    {
      std::string s;
      auto add = [&s](const std::string &part) { s += (s.empty() ? "" : " ") + part; };
      if (vary_n || none)
      {
        add((vary_g || vary_e || vary_m ? "N=" : "") + std::to_string(std::get<0>(k)));
      }
      if (vary_g)
      {
        add(num(std::get<1>(k), "%g"));
      }
      if (vary_e)
      {
        add(num(std::get<2>(k), "%g"));
      }
      if (vary_m)
      {
        add(num(std::get<3>(k), "%g"));
      }
      return s;
    };
    std::string axis;
    if (vary_n || none)
    {
      axis = "N";
    }
    for (auto [flag, name] : {std::pair{vary_g, "gamma"}, {vary_e, "eps"}, {vary_m, "mu"}})
    {
      if (flag)
      {
        axis += (axis.empty() ? "" : ",") + std::string(name);
      }
    }

    std::vector<Key> columns;
    std::vector<std::string> methods;
    for (const auto *r : group)
    {
      if (std::find(columns.begin(), columns.end(), key_of(r)) == columns.end())
      {
        columns.push_back(key_of(r));
      }
      if (std::find(methods.begin(), methods.end(), r->method) == methods.end())
      {
        methods.push_back(r->method);
      }
    }
    std::sort(columns.begin(), columns.end());
    std::sort(methods.begin(), methods.end(), [](const auto &a, const auto &b)
              { return std::make_pair(method_rank(a), a) < std::make_pair(method_rank(b), b); });

    std::vector<std::vector<std::string>> table;
    table.push_back({axis});
    for (const auto &k : columns)
    {
      table[0].push_back(label_of(k));
    }
    auto size_row = [&](const std::string &title, auto field)
    {
      std::vector<std::string> row{title};
      for (const auto &k : columns)
      {
        int v = 0;
        for (const auto *r : group)
        {
          if (key_of(r) == k)
          {
            v = std::max(v, field(r));
          }
        }
        row.push_back(std::to_string(v));
      }
      table.push_back(row);
    };
    size_row("dofs", [](const ResultRow *r) { return r->dofs; });
    size_row("NK size", [](const ResultRow *r) { return r->nk; });
    size_row("SNK size", [](const ResultRow *r) { return r->snk; });
    size_row("GenEO size", [](const ResultRow *r) { return r->geneo; });
    const std::size_t separator = table.size();
    bool any_kappa = false;
    for (const auto &m : methods)
    {
      std::vector<std::string> row{m};
      for (const auto &k : columns)
      {
        std::string cell = "-";
        for (const auto *r : group)
        {
          if (r->method == m && key_of(r) == k)
          {
            cell = !r->error.empty() ? "err"
                                     : std::to_string(r->iters) + (r->converged ? "" : "*");
            any_kappa = any_kappa || r->kappa >= 0.0;
          }
        }
        row.push_back(cell);
      }
      table.push_back(row);
    }
    if (any_kappa)
    {
      for (const auto &m : methods)
      {
        std::vector<std::string> row{"kappa " + m};
        bool has = false;
        for (const auto &k : columns)
        {
          std::string cell = "-";
          for (const auto *r : group)
          {
            if (r->method == m && key_of(r) == k && r->kappa >= 0.0)
            {
              cell = num(r->kappa, "%.4g");
              has = true;
            }
          }
          row.push_back(cell);
        }
        if (has)
        {
          table.push_back(row);
        }
      }
    }

    std::vector<std::size_t> width(table[0].size(), 0);
    for (const auto &row : table)
    {
      for (std::size_t c = 0; c < row.size(); ++c)
      {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    if (!first)
    {
      out << '\n';
    }
    first = false;
    out << scenario << '\n';
    auto rule = [&]()
    {
      std::size_t total = 0;
      for (auto w : width)
      {
        total += w + 3;
      }
      out << std::string(total, '-') << '\n';
    };
    for (std::size_t i = 0; i < table.size(); ++i)
    {
      if (i == 1 || i == separator)
      {
        rule();
      }
      const auto &row = table[i];
      for (std::size_t c = 0; c < row.size(); ++c)
      {
        const auto pad = std::string(width[c] - row[c].size(), ' ');
        out << (c == 0 ? row[c] + pad : pad + row[c]) << (c + 1 < row.size() ? " | " : "");
      }
      out << '\n';
    }
  }
  if (std::any_of(rows.begin(), rows.end(),
                  [](const ResultRow &r) { return !r.converged && r.error.empty(); }))
  {
    out << "\n* not converged within the iteration limit\n";
  }
}

bool BoundReport::all_ok() const
{
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck &c) { return c.ok; });
}

BoundReport verify_bounds(const std::vector<ResultRow> &rows, double tol)
{
  BoundReport rep;
  for (const auto &r : rows)
  {
    if (r.method != method_name(Method::ASSNKGenEO) || r.kappa < 0.0)
    {
      continue;
    }
    BoundCheck c;
    c.scenario = r.scenario;
    c.method = r.method;
    c.N = r.N;
    c.gamma = r.gamma;
    c.kappa = r.kappa;
    const double lower = 1.0 / (1.0 + r.k1 * r.tau);
    c.bound = (1.0 + r.k1 * r.tau) * r.k0;
    c.margin = c.bound - r.kappa;
    c.ok = r.kappa <= c.bound + tol && r.lambda_max <= r.k0 + tol && r.lambda_min >= lower - tol;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace maxdd
