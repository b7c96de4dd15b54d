#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steinlab/common.hpp"

namespace steinlab {

// Dense complex Hermitian matrix, row-major storage.
// Construction validates A = A^dagger within 1e-12 * max|entry|.
class HermitianOperator {
 public:
  HermitianOperator(int dim, std::vector<cplx> entries);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  static HermitianOperator diagonal(const std::vector<double>& d);

  int dim() const { return dim_; }
  const cplx& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
  const std::vector<cplx>& entries() const { return entries_; }

  double trace() const;
  double max_abs() const;
  double frobenius_norm() const;

 private:
  struct trusted_tag {};
  HermitianOperator(int dim, std::vector<cplx> entries, trusted_tag);

  int dim_;
  std::vector<cplx> entries_;

  friend HermitianOperator detail_make_trusted(int, std::vector<cplx>&&);
};

// Internal: wraps storage that is already exactly Hermitian, skipping validation.
HermitianOperator detail_make_trusted(int dim, std::vector<cplx>&& entries);

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);

// Tr(A B) for Hermitian A, B; the product trace is real.
double trace_product(const HermitianOperator& a, const HermitianOperator& b);

struct EigenDecomposition {
  int dim = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<cplx> eigenvectors;   // row-major; column c is the eigenvector of eigenvalues[c]
};

// Cyclic Jacobi diagonalization; converges when the off-diagonal Frobenius
// mass drops below 1e-13 * ||A||_F.
EigenDecomposition eig(const HermitianOperator& a);

// A^alpha taken on the support of A only. Eigenvalues below
// dim * 1e-12 * lambda_max are treated as zero; eigenvalues in (-1e-10, 0)
// are clipped, anything more negative is rejected. alpha = 0 yields the
// support projector.
HermitianOperator power_on_support(const HermitianOperator& a, double alpha);

// Sum of |negative eigenvalues|.
double negative_part_trace(const HermitianOperator& a);

// Sum of |eigenvalues| (Schatten 1-norm).
double trace_norm(const HermitianOperator& a);

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

// n-fold tensor power; requires dim^n <= dim_cap.
HermitianOperator kron_power(const HermitianOperator& a, int n, std::uint64_t dim_cap = kDefaultDimCap);

// supp A subseteq supp B, checked via ||(I - B^0) A (I - B^0)||.
bool support_leq(const HermitianOperator& a, const HermitianOperator& b);

// Density operator: PSD within -1e-10 and unit trace within 1e-10.
class State {
 public:
  explicit State(HermitianOperator op);

  // Full-rank state G G^dagger / Tr(G G^dagger) for a seeded complex
  // Gaussian G; deterministic per (dim, seed).
  static State random(int dim, std::uint64_t seed);

  const HermitianOperator& op() const { return op_; }
  int dim() const { return op_.dim(); }

  State tensor_power(int n, std::uint64_t dim_cap = kDefaultDimCap) const;

 private:
  struct trusted_tag {};
  State(HermitianOperator op, trusted_tag) : op_(std::move(op)) {}

  HermitianOperator op_;
};

double trace_distance(const State& a, const State& b);

// Text operator files: "dim N", then "re" with N*N reals, then "im" with
// N*N reals, row-major. Hermiticity is validated on load. Writes use %.17g
// so values round-trip bit-exactly.
HermitianOperator load_operator(const std::string& path);
void save_operator(const HermitianOperator& a, const std::string& path);

}  // namespace steinlab
