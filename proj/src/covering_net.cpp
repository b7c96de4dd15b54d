#include "steinlab/covering_net.hpp"

#include <cmath>
#include <limits>

namespace steinlab {

CoveringNet build_net(const std::vector<State>& pool, double delta) {
  if (pool.empty()) throw Error(errc::invalid_argument, "net pool must be non-empty");
  if (delta < 0.0) throw Error(errc::invalid_argument, "net delta must be >= 0");
  const int p = static_cast<int>(pool.size());

  std::vector<std::vector<double>> dist(p, std::vector<double>(p, 0.0));
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) dist[i][j] = dist[j][i] = trace_distance(pool[i], pool[j]);

  CoveringNet net;
  net.delta = delta;
  net.pool_size = p;

  if (delta == 0.0) {
    for (int i = 0; i < p; ++i) {
      bool dup = false;
      for (int kept : net.member_indices)
        if (dist[i][kept] <= 1e-12) {
          dup = true;
          break;
        }
      if (!dup) net.member_indices.push_back(i);
    }
  } else {
    net.member_indices.push_back(0);
    for (;;) {
      double worst = -1.0;
      int worst_i = -1;
      for (int i = 0; i < p; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int kept : net.member_indices) best = std::min(best, dist[i][kept]);
        if (best > worst) {
          worst = best;
          worst_i = i;
        }
      }
      if (worst <= delta) {
        net.achieved_radius = worst;
        break;
      }
      net.member_indices.push_back(worst_i);
    }
  }

  if (delta == 0.0) {
    double worst = 0.0;
    for (int i = 0; i < p; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int kept : net.member_indices) best = std::min(best, dist[i][kept]);
      worst = std::max(worst, best);
    }
    net.achieved_radius = worst;
  }

  for (int i : net.member_indices) net.members.push_back(pool[i]);

  if (delta > 0.0) {
    const double bound_log = net_cardinality_bound_log(pool[0].dim(), delta);
    const double sz_log = std::log(static_cast<double>(net.members.size()));
    if (sz_log > std::min(std::log(static_cast<double>(p)), bound_log) + 1e-12)
      throw Error(errc::internal, "covering net exceeded the cardinality bound");
  }
  return net;
}

double delta_schedule(double epsilon, int n, bool is_finite_family) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(errc::invalid_argument, "epsilon must lie in (0, 1)");
  if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
  if (is_finite_family) return 0.0;
  return epsilon / (2.0 * static_cast<double>(n) * static_cast<double>(n));
}

double net_cardinality_bound_log(int dim, double delta) {
  if (delta <= 0.0) return std::numeric_limits<double>::infinity();
  const double d = static_cast<double>(dim);
  const double cap_d = (d + 1.0) * d / 2.0;
  return cap_d * std::log1p(2.0 / delta);
}

std::pair<double, double> tensor_distance_check(const State& a, const State& b, int n,
                                                std::uint64_t dim_cap) {
  if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
  const HermitianOperator an = kron_power(a.op(), n, dim_cap);
  const HermitianOperator bn = kron_power(b.op(), n, dim_cap);
  const double lhs = trace_norm(an - bn);
  const double rhs = static_cast<double>(n) * trace_distance(a, b);
  if (lhs > rhs + 1e-9)
    throw Error(errc::internal, "tensor-power distance exceeded n times the single-copy distance");
  return {lhs, rhs};
}

}  // namespace steinlab
