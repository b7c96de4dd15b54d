#pragma once

// Internal dense helpers shared by the implementation files. Matrices are
// row-major std::vector<cplx> of size dim*dim.

#include <cmath>
#include <cstdint>
#include <vector>

#include "steinlab/common.hpp"

namespace steinlab::detail {

inline std::size_t idx(int dim, int i, int j) { return static_cast<std::size_t>(i) * dim + j; }

void mat_mul(const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<cplx>& out, int dim);

// out = v^dagger a v  (a square, v square; both dim x dim)
void conjugate_by(const std::vector<cplx>& a, const std::vector<cplx>& v, std::vector<cplx>& out,
                  int dim, std::vector<cplx>& scratch);

// Cyclic Jacobi with threshold skipping on a Hermitian matrix held in m
// (full storage). Rotations are accumulated into v (must hold the identity,
// or a prior basis to compose with). m ends near-diagonal. Returns the
// number of sweeps used; throws on non-convergence.
int jacobi_diagonalize(std::vector<cplx>& m, int dim, std::vector<cplx>& v, double rel_tol,
                       int max_sweeps);

double off_diagonal_frobenius(const std::vector<cplx>& m, int dim);

inline void set_identity(std::vector<cplx>& v, int dim) {
  v.assign(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
  for (int i = 0; i < dim; ++i) v[idx(dim, i, i)] = 1.0;
}

// Deterministic uniforms and standard normals from a splitmix64 stream
// (Box-Muller over explicitly constructed uniforms, so output does not
// depend on standard library distribution internals).
struct RandomSource {
  explicit RandomSource(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64();
  double uniform();  // in (0, 1)
  double normal();

  std::uint64_t state;
  double cached = 0.0;
  bool have_cached = false;
};

}  // namespace steinlab::detail
