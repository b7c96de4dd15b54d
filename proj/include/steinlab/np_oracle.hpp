#pragma once

#include <utility>
#include <vector>

#include "steinlab/hermitian.hpp"

namespace steinlab {

// Acceptance operator for the null hypothesis; (t0, I - t0) is a binary POVM.
struct BinaryTest {
  HermitianOperator t0 = HermitianOperator::identity(1);
};

// Certificate pair for the optimal type-II error program. dual_value is a
// lower bound on beta_epsilon for any lambdas >= 0; primal_value is the
// type-II error of a feasible test, hence an upper bound.
struct DualSolution {
  std::vector<double> lambdas;
  double dual_value = 0.0;
  BinaryTest primal_test;
  double primal_value = 0.0;
  double gap = 0.0;
  bool certified = false;         // gap <= 1e-7 with a feasible primal test
  bool primal_recovered = false;  // false: only the dual lower bound is meaningful
  long iterations = 0;            // inner objective evaluations
};

// Lagrangian dual objective: sum_i lambda_i (1-eps) minus the negative part
// trace of sigma_n - sum_i lambda_i omega_i.
double dual_value(const std::vector<double>& lambdas, const std::vector<HermitianOperator>& nulls,
                  const HermitianOperator& sigma_n, double epsilon);

// Exact optimal type-II error for a finite null list against sigma_n.
// Golden-section on the scalar multiplier for one null; projected
// supergradient ascent plus line-search and active-set polish otherwise.
DualSolution beta_exact(const std::vector<HermitianOperator>& nulls, const HermitianOperator& sigma_n,
                        double epsilon, std::uint64_t seed = 0);

// Classical restriction: exact beta_epsilon for probability vectors.
// Likelihood-ratio sorting with threshold randomization for one null;
// the same dual over diagonal matrices, solved exactly at the kink
// arrangement vertices, for several.
double classical_np(const std::vector<std::vector<double>>& p_list, const std::vector<double>& q,
                    double epsilon);

// (worst-case type-I error over the nulls, type-II error).
std::pair<double, double> type_errors(const BinaryTest& test, const std::vector<HermitianOperator>& nulls,
                                      const HermitianOperator& sigma_n);

}  // namespace steinlab
