#pragma once

#include <utility>
#include <vector>

#include "steinlab/hermitian.hpp"

namespace steinlab {

struct CoveringNet {
  double delta = 0.0;
  std::vector<State> members;
  std::vector<int> member_indices;  // positions in the source pool
  double achieved_radius = 0.0;
  int pool_size = 0;
};

// Greedy farthest-point net in trace-norm distance. delta = 0 deduplicates
// the pool at tolerance 1e-12. Ties break toward the lowest pool index.
CoveringNet build_net(const std::vector<State>& pool, double delta);

// 0 for finite families, epsilon/(2 n^2) otherwise; always <= epsilon/(2n).
double delta_schedule(double epsilon, int n, bool is_finite_family);

// log of (1 + 2/delta)^D with D = (dim+1) dim / 2, the covering-number
// bound for the state space. +inf when delta = 0.
double net_cardinality_bound_log(int dim, double delta);

// Returns (||rho^(x)n - rho'^(x)n||_1, n ||rho - rho'||_1) and checks the
// first does not exceed the second.
std::pair<double, double> tensor_distance_check(const State& a, const State& b, int n,
                                                std::uint64_t dim_cap = kDefaultDimCap);

}  // namespace steinlab
