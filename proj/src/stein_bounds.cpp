#include "steinlab/stein_bounds.hpp"

#include <cmath>
#include <future>
#include <sstream>

namespace steinlab {

namespace {

double sqrt_term_coeff(double kmax, int dim, double d1) {
  return std::sqrt(8.0 * kmax * kmax + std::log(static_cast<double>(dim)) + d1);
}

double log_card_for(const HypothesisInstance& inst, double delta_n, int* net_size_out,
                    std::vector<State>* net_out) {
  if (inst.finite_family()) {
    CoveringNet net = build_net(inst.pool(), 0.0);
    if (net_size_out) *net_size_out = static_cast<int>(net.members.size());
    if (net_out) *net_out = net.members;
    return std::log(static_cast<double>(net.members.size()));
  }
  CoveringNet net = build_net(inst.pool(), delta_n);
  if (net_size_out) *net_size_out = static_cast<int>(net.members.size());
  if (net_out) *net_out = net.members;
  return net_cardinality_bound_log(inst.dim(), delta_n);
}

}  // namespace

HypothesisInstance::HypothesisInstance(std::vector<State> null_pool, State sigma, double epsilon,
                                       bool finite_family)
    : pool_(std::move(null_pool)), sigma_(std::move(sigma)), epsilon_(epsilon), finite_family_(finite_family) {
  if (pool_.empty()) throw Error(errc::invalid_argument, "null pool must be non-empty");
  if (!(epsilon_ > 0.0 && epsilon_ < 1.0))
    throw Error(errc::invalid_argument, "epsilon must lie in (0, 1)");
  for (const State& rho : pool_) {
    if (rho.dim() != sigma_.dim())
      throw Error(errc::invalid_argument, "pool state dimension differs from sigma");
    if (!support_leq(rho.op(), sigma_.op()))
      throw Error(errc::support_violation,
                  "pool state support is not contained in the support of sigma");
  }
}

double d1_inf(const HypothesisInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  for (const State& rho : inst.pool()) best = std::min(best, d_umegaki(rho.op(), inst.sigma().op()).value);
  return best;
}

double kappa_max(const HypothesisInstance& inst) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const State& rho : inst.pool()) worst = std::max(worst, kappa(rho, inst.sigma()));
  const double cap = std::log(2.0 + power_on_support(inst.sigma().op(), -0.5).trace());
  if (worst > cap + 1e-9)
    throw Error(errc::internal, "kappa_max exceeded its log(2 + Tr sigma^(-1/2)) bound");
  return worst;
}

double amv_upper(const State& rho, const State& sigma, double epsilon, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(errc::invalid_argument, "amv_upper needs alpha in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(errc::invalid_argument, "epsilon must lie in (0, 1)");
  const double dv = d_old(rho.op(), sigma.op(), alpha).value;
  return -dv + alpha / (1.0 - alpha) * std::log(1.0 / epsilon) - binary_entropy(alpha) / (1.0 - alpha);
}

double amv_lower(const State& rho, const State& sigma, double epsilon, int n) {
  if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(errc::invalid_argument, "epsilon must lie in (0, 1)");
  const double d1 = d_umegaki(rho.op(), sigma.op()).value;
  if (std::isinf(d1)) throw Error(errc::support_violation, "amv_lower requires supp rho within supp sigma");
  const double kap = kappa(rho, sigma);
  return -d1 - 4.0 * std::sqrt(2.0) * kap * std::log(1.0 / (1.0 - epsilon)) / std::sqrt(static_cast<double>(n));
}

ScheduleParams schedule_params(const HypothesisInstance& inst, int n, double log_card) {
  if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
  if (!(log_card >= 0.0)) throw Error(errc::invalid_argument, "log_card must be >= 0");
  const double eps = inst.epsilon();
  const double big_l = std::log(2.0) + log_card + std::log(1.0 / eps);
  const double kmax = kappa_max(inst);
  const double d1 = d1_inf(inst);

  ScheduleParams out;
  const double ch = 2.0 + big_l / static_cast<double>(n);
  out.c = std::acosh(ch);
  out.a_star = std::sqrt(big_l) / std::sqrt(4.0 * kmax * kmax * ch + std::log(static_cast<double>(inst.dim())) + d1);
  out.delta = std::min(0.5, out.c / (2.0 * kmax));
  const double ratio = out.a_star / std::sqrt(static_cast<double>(n));
  if (ratio > 0.5 + 1e-12 || ratio > out.c / (2.0 * kmax) + 1e-12)
    throw Error(errc::infeasible,
                "schedule infeasible: a*/sqrt(n) leaves the admissible alpha window; n too small");
  return out;
}

ScheduleParams schedule_params(const HypothesisInstance& inst, int n, std::uint64_t net_size) {
  if (net_size < 1) throw Error(errc::invalid_argument, "net_size must be >= 1");
  return schedule_params(inst, n, std::log(static_cast<double>(net_size)));
}

namespace {

double stein_upper_from_log_card(const HypothesisInstance& inst, int n, double log_card, double kmax,
                                 double d1) {
  const double big_l = std::log(2.0) + log_card + std::log(1.0 / inst.epsilon());
  const double ln = big_l / static_cast<double>(n);
  return -d1 + std::sqrt(ln) * 2.0 * sqrt_term_coeff(kmax, inst.dim(), d1) + ln * 4.0 * kmax;
}

}  // namespace

double stein_upper(const HypothesisInstance& inst, int n, double delta_n) {
  if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
  const double eps = inst.epsilon();
  if (delta_n < 0.0 || delta_n > eps / (2.0 * n) + 1e-15)
    throw Error(errc::invalid_argument, "delta_n must lie in [0, epsilon/(2n)]");
  const double log_card = log_card_for(inst, delta_n, nullptr, nullptr);
  return stein_upper_from_log_card(inst, n, log_card, kappa_max(inst), d1_inf(inst));
}

double stein_lower(const HypothesisInstance& inst, int n) {
  if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
  const double kmax = kappa_max(inst);
  const double d1 = d1_inf(inst);
  return -d1 - 4.0 * std::sqrt(2.0) * std::log(1.0 / (1.0 - inst.epsilon())) * kmax /
                   std::sqrt(static_cast<double>(n));
}

std::vector<BoundReport> bound_sweep(const HypothesisInstance& inst, const std::vector<int>& n_list,
                                     bool with_exact, std::uint64_t seed, std::uint64_t dim_cap,
                                     double delta_override) {
  if (n_list.empty()) throw Error(errc::invalid_argument, "n list must be non-empty");
  const double d1 = d1_inf(inst);
  const double kmax = kappa_max(inst);

  auto one_row = [&](int n) {
    if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
    BoundReport rep;
    rep.n = n;
    rep.d1 = d1;
    rep.kappa_max = kmax;

    double delta_n;
    bool infinite_accounting;
    if (delta_override >= 0.0) {
      delta_n = delta_override;
      infinite_accounting = true;
    } else {
      delta_n = delta_schedule(inst.epsilon(), n, inst.finite_family());
      infinite_accounting = !inst.finite_family();
    }
    if (delta_n > inst.epsilon() / (2.0 * n) + 1e-15)
      throw Error(errc::invalid_argument, "delta_n exceeds epsilon/(2n)");

    std::vector<State> net;
    double log_card;
    if (!infinite_accounting) {
      CoveringNet cn = build_net(inst.pool(), 0.0);
      net = cn.members;
      log_card = std::log(static_cast<double>(net.size()));
    } else {
      CoveringNet cn = build_net(inst.pool(), delta_n);
      net = cn.members;
      log_card = net_cardinality_bound_log(inst.dim(), delta_n);
      if (delta_n == 0.0) log_card = std::log(static_cast<double>(net.size()));
    }
    rep.net_size = static_cast<int>(net.size());

    rep.lower = stein_lower(inst, n);
    rep.upper_raw = stein_upper_from_log_card(inst, n, log_card, kmax, d1);
    rep.upper_clamped = std::min(0.0, rep.upper_raw);
    try {
      schedule_params(inst, n, log_card);
      rep.schedule_ok = true;
    } catch (const Error& e) {
      if (e.code() != errc::infeasible) throw;
      rep.schedule_ok = false;
    }

    if (with_exact) {
      std::uint64_t total = 1;
      bool fits = true;
      for (int i = 0; i < n; ++i) {
        if (total > dim_cap / static_cast<std::uint64_t>(inst.dim())) {
          fits = false;
          break;
        }
        total *= static_cast<std::uint64_t>(inst.dim());
      }
      if (!fits) {
        rep.cap_exceeded = true;
      } else {
        std::vector<HermitianOperator> nulls;
        nulls.reserve(net.size());
        for (const State& s : net) nulls.push_back(kron_power(s.op(), n, dim_cap));
        const HermitianOperator sig_n = kron_power(inst.sigma().op(), n, dim_cap);
        DualSolution sol = beta_exact(nulls, sig_n, inst.epsilon(), seed ^ (0x9e37ULL * n));
        rep.exact_gap = sol.gap;
        rep.exact_certified = sol.certified;
        if (sol.certified || (sol.primal_recovered && sol.gap <= 1e-5)) {
          rep.exact = std::log(sol.primal_value) / static_cast<double>(n);
          if (inst.finite_family() && rep.exact_certified) {
            if (!(rep.lower - 1e-6 <= *rep.exact && *rep.exact <= rep.upper_raw + 1e-6))
              throw Error(errc::internal, "bound report: exact value escaped the bracket");
          }
        }
      }
    }
    return rep;
  };

  std::vector<BoundReport> out;
  if (with_exact && n_list.size() > 1) {
    std::vector<std::future<BoundReport>> futs;
    futs.reserve(n_list.size());
    for (int n : n_list) futs.push_back(std::async(std::launch::async, one_row, n));
    for (auto& f : futs) out.push_back(f.get());
  } else {
    for (int n : n_list) out.push_back(one_row(n));
  }
  return out;
}

std::string sweep_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream os;
  os << "n,lower,upper_raw,upper_clamped,exact,d1,kappa_max,net_size,schedule_flag\n";
  for (const BoundReport& r : reports) {
    os << r.n << ',' << format_value(r.lower) << ',' << format_value(r.upper_raw) << ','
       << format_value(r.upper_clamped) << ',';
    if (r.exact) os << format_value(*r.exact);
    os << ',' << format_value(r.d1) << ',' << format_value(r.kappa_max) << ',' << r.net_size << ',';
    std::string flag = r.schedule_ok ? "ok" : "heuristic";
    if (r.cap_exceeded) flag += ";cap";
    else if (!r.exact && r.exact_gap > 0.0) flag += ";uncert";
    os << flag << '\n';
  }
  return os.str();
}

}  // namespace steinlab
