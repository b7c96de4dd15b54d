// Command-line front end for the steinlab shared library. Everything goes
// through the C API in steinlab.h.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steinlab.h"

namespace {

struct OpDeleter {
  void operator()(steinlab_op* p) const { steinlab_op_free(p); }
};
struct InstDeleter {
  void operator()(steinlab_instance* p) const { steinlab_instance_free(p); }
};
using OpPtr = std::unique_ptr<steinlab_op, OpDeleter>;
using InstPtr = std::unique_ptr<steinlab_instance, InstDeleter>;

char g_err[512];

OpPtr load_op(const std::string& path) {
  steinlab_op* raw = nullptr;
  if (steinlab_op_load(path.c_str(), &raw, g_err, sizeof g_err) != STEINLAB_OK) {
    std::cerr << "error: " << g_err << "\n";
    std::exit(2);
  }
  return OpPtr(raw);
}

std::string fmt(double x) {
  char buf[64];
  steinlab_format_value(x, buf, sizeof buf);
  return buf;
}

InstPtr make_instance(const std::vector<OpPtr>& pool, const steinlab_op* sigma, double epsilon,
                      bool finite) {
  std::vector<const steinlab_op*> raw;
  raw.reserve(pool.size());
  for (const OpPtr& p : pool) raw.push_back(p.get());
  steinlab_instance* inst = nullptr;
  if (steinlab_instance_create(raw.data(), static_cast<int>(raw.size()), sigma, epsilon,
                               finite ? 1 : 0, &inst, g_err, sizeof g_err) != STEINLAB_OK) {
    std::cerr << "error: " << g_err << "\n";
    std::exit(2);
  }
  return InstPtr(inst);
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return 2;
  }
  out << text;
  return out ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum hypothesis-testing bounds: Renyi divergences, finite-size "
               "composite Stein bounds, covering nets and an exact type-II error oracle"};
  app.require_subcommand(1);

  // divergence
  auto* div = app.add_subcommand("divergence", "evaluate a Renyi divergence between two operators");
  std::string rho_path, sigma_path, family = "old";
  double alpha = 0.5;
  div->add_option("--rho", rho_path, "operator file for rho")->required();
  div->add_option("--sigma", sigma_path, "operator file for sigma")->required();
  div->add_option("--family", family, "old, new or umegaki")->required();
  div->add_option("--alpha", alpha, "Renyi parameter (ignored for umegaki)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "per-n bound report as CSV");
  std::vector<std::string> pool_paths;
  std::string sweep_sigma, out_path;
  double sweep_eps = 0.1, delta_override = -1.0;
  int n_min = 1, n_max = 4;
  bool with_exact = false, infinite_family = false;
  unsigned long long seed = 0, cap = 4096;
  sweep->add_option("--pool", pool_paths, "operator files for the null family")->required();
  sweep->add_option("--sigma", sweep_sigma, "operator file for sigma")->required();
  sweep->add_option("--epsilon", sweep_eps, "type-I error threshold in (0,1)")->required();
  sweep->add_option("--n-min", n_min, "smallest copy count");
  sweep->add_option("--n-max", n_max, "largest copy count");
  sweep->add_flag("--exact", with_exact, "also run the exact oracle per n");
  sweep->add_flag("--infinite", infinite_family,
                  "treat the pool as a sample of an infinite family (net schedule)");
  sweep->add_option("--delta", delta_override, "fixed net radius override (implies --infinite)");
  sweep->add_option("--seed", seed, "seed for the oracle search");
  sweep->add_option("--cap", cap, "dimension cap for materialized tensor powers");
  sweep->add_option("--out", out_path, "write CSV here instead of stdout");

  // verify
  auto* ver = app.add_subcommand("verify", "run the full property-verification suite");
  unsigned long long vseed = 0;
  int trials = 1;
  ver->add_option("--seed", vseed, "seed for sampled instances");
  ver->add_option("--trials", trials, "sample-size multiplier (>= 1)");

  // net
  auto* net = app.add_subcommand("net", "greedy trace-norm covering net over a pool");
  std::vector<std::string> net_pool;
  double net_delta = 0.0;
  net->add_option("--pool", net_pool, "operator files for the pool")->required();
  net->add_option("--delta", net_delta, "covering radius (0 deduplicates)")->required();

  // oracle
  auto* ora = app.add_subcommand("oracle", "exact optimal type-II error for the n-copy problem");
  std::vector<std::string> ora_pool;
  std::string ora_sigma;
  double ora_eps = 0.1;
  int ora_n = 1;
  unsigned long long ora_seed = 0, ora_cap = 4096;
  ora->add_option("--pool", ora_pool, "operator files for the null family")->required();
  ora->add_option("--sigma", ora_sigma, "operator file for sigma")->required();
  ora->add_option("--epsilon", ora_eps, "type-I error threshold in (0,1)")->required();
  ora->add_option("--n", ora_n, "copy count");
  ora->add_option("--seed", ora_seed, "seed for the dual search");
  ora->add_option("--cap", ora_cap, "dimension cap for materialized tensor powers");

  CLI11_PARSE(app, argc, argv);

  if (div->parsed()) {
    OpPtr rho = load_op(rho_path);
    OpPtr sigma = load_op(sigma_path);
    double value = 0.0;
    int is_inf = 0;
    if (steinlab_divergence(rho.get(), sigma.get(), family.c_str(), alpha, &value, &is_inf, g_err,
                            sizeof g_err) != STEINLAB_OK) {
      std::cerr << "error: " << g_err << "\n";
      return 2;
    }
    std::cout << (is_inf ? "INF" : fmt(value)) << "\n";
    return 0;
  }

  if (sweep->parsed()) {
    std::vector<OpPtr> pool;
    for (const std::string& p : pool_paths) pool.push_back(load_op(p));
    OpPtr sigma = load_op(sweep_sigma);
    const bool finite = !(infinite_family || delta_override >= 0.0);
    InstPtr inst = make_instance(pool, sigma.get(), sweep_eps, finite);
    char* csv = nullptr;
    if (steinlab_sweep_csv(inst.get(), n_min, n_max, with_exact ? 1 : 0, seed, cap, delta_override,
                           &csv, g_err, sizeof g_err) != STEINLAB_OK) {
      std::cerr << "error: " << g_err << "\n";
      return 2;
    }
    const std::string text = csv;
    steinlab_free_string(csv);
    return write_output(text, out_path);
  }

  if (ver->parsed()) {
    char* report = nullptr;
    long failures = 0;
    if (steinlab_verify(vseed, trials, &report, &failures, g_err, sizeof g_err) != STEINLAB_OK) {
      std::cerr << "error: " << g_err << "\n";
      return 2;
    }
    std::cout << report;
    steinlab_free_string(report);
    return failures == 0 ? 0 : 1;
  }

  if (net->parsed()) {
    std::vector<OpPtr> pool;
    for (const std::string& p : net_pool) pool.push_back(load_op(p));
    std::vector<const steinlab_op*> raw;
    for (const OpPtr& p : pool) raw.push_back(p.get());
    std::vector<int> indices(pool.size());
    int size = 0;
    double radius = 0.0, bound_log = 0.0;
    if (steinlab_net(raw.data(), static_cast<int>(raw.size()), net_delta, indices.data(), &size,
                     &radius, &bound_log, g_err, sizeof g_err) != STEINLAB_OK) {
      std::cerr << "error: " << g_err << "\n";
      return 2;
    }
    std::cout << "net_size " << size << "\n";
    std::cout << "achieved_radius " << fmt(radius) << "\n";
    std::cout << "cardinality_bound " << fmt(std::exp(bound_log)) << "\n";
    std::cout << "members";
    for (int i = 0; i < size; ++i) std::cout << ' ' << indices[i];
    std::cout << "\n";
    return 0;
  }

  if (ora->parsed()) {
    std::vector<OpPtr> pool;
    for (const std::string& p : ora_pool) pool.push_back(load_op(p));
    OpPtr sigma = load_op(ora_sigma);
    InstPtr inst = make_instance(pool, sigma.get(), ora_eps, true);
    double beta = 0.0, dual = 0.0, gap = 0.0, alpha_worst = 0.0;
    int certified = 0;
    if (steinlab_oracle_run(inst.get(), ora_n, ora_seed, ora_cap, &beta, &dual, &gap, &certified,
                            &alpha_worst, g_err, sizeof g_err) != STEINLAB_OK) {
      std::cerr << "error: " << g_err << "\n";
      return 2;
    }
    std::cout << "beta " << fmt(beta) << "\n";
    std::cout << "dual " << fmt(dual) << "\n";
    std::cout << "gap " << fmt(gap) << "\n";
    std::cout << "certified " << certified << "\n";
    std::cout << "alpha_worst " << fmt(alpha_worst) << "\n";
    std::cout << "log_beta_over_n " << fmt(std::log(beta) / ora_n) << "\n";
    return 0;
  }

  return 2;
}
