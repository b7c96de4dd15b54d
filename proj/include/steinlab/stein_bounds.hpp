#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steinlab/covering_net.hpp"
#include "steinlab/divergence.hpp"
#include "steinlab/np_oracle.hpp"

namespace steinlab {

// Composite null family (finite pool or a finite sample of an infinite
// family), simple alternative sigma, and the type-I threshold epsilon.
// Construction rejects pool members whose support is not contained in the
// support of sigma, so kappa and the relative entropies stay finite.
class HypothesisInstance {
 public:
  HypothesisInstance(std::vector<State> null_pool, State sigma, double epsilon, bool finite_family);

  const std::vector<State>& pool() const { return pool_; }
  const State& sigma() const { return sigma_; }
  double epsilon() const { return epsilon_; }
  bool finite_family() const { return finite_family_; }
  int dim() const { return sigma_.dim(); }

 private:
  std::vector<State> pool_;
  State sigma_;
  double epsilon_;
  bool finite_family_;
};

// min over the pool of the Umegaki relative entropy to sigma.
double d1_inf(const HypothesisInstance& inst);

// max over the pool of kappa(rho, sigma); checked against log(2 + Tr sigma^(-1/2)).
double kappa_max(const HypothesisInstance& inst);

// Single-pair upper bound on log beta_eps(rho || sigma), any alpha in (0,1).
double amv_upper(const State& rho, const State& sigma, double epsilon, double alpha);

// Single-pair lower bound on (1/n) log beta_eps(rho^(x)n || sigma^(x)n).
double amv_lower(const State& rho, const State& sigma, double epsilon, int n);

struct ScheduleParams {
  double c = 0.0;       // cosh c = 2 + L/n
  double a_star = 0.0;  // optimal coefficient in alpha = 1 - a/sqrt(n)
  double delta = 0.0;   // admissible alpha-window radius min(1/2, c/(2 kappa_max))
};

// Proof-schedule parameters for the composite upper bound; log_card is
// log |N_delta|. Throws errc::infeasible when a*/sqrt(n) leaves the window.
ScheduleParams schedule_params(const HypothesisInstance& inst, int n, double log_card);
ScheduleParams schedule_params(const HypothesisInstance& inst, int n, std::uint64_t net_size);

// Composite finite-size bounds on (1/n) log beta_eps. The upper bound is the
// raw three-term formula; reports clamp it at 0 separately. For finite
// families the net is the deduplicated pool; for infinite families the
// cardinality entering the formula is the covering bound (1 + 2/delta_n)^D.
double stein_upper(const HypothesisInstance& inst, int n, double delta_n);
double stein_lower(const HypothesisInstance& inst, int n);

struct BoundReport {
  int n = 0;
  double lower = 0.0;
  double upper_raw = 0.0;
  double upper_clamped = 0.0;
  double d1 = 0.0;
  double kappa_max = 0.0;
  int net_size = 0;
  std::optional<double> exact;  // (1/n) log beta from the oracle
  double exact_gap = 0.0;
  bool exact_certified = false;
  bool schedule_ok = true;
  bool cap_exceeded = false;
};

// Per-n reports; delta_override >= 0 forces a constant net radius together
// with the infinite-family cardinality accounting.
std::vector<BoundReport> bound_sweep(const HypothesisInstance& inst, const std::vector<int>& n_list,
                                     bool with_exact, std::uint64_t seed = 0,
                                     std::uint64_t dim_cap = kDefaultDimCap,
                                     double delta_override = -1.0);

// CSV with header n,lower,upper_raw,upper_clamped,exact,d1,kappa_max,net_size,schedule_flag.
std::string sweep_csv(const std::vector<BoundReport>& reports);

}  // namespace steinlab
