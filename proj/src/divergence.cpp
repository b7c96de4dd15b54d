#include "steinlab/divergence.hpp"

#include <cmath>
#include <limits>

#include "detail.hpp"

namespace steinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0)
    throw Error(errc::invalid_argument, "alpha must lie in (0, inf) excluding 1");
}

void check_nonzero_psd(const HermitianOperator& a, const char* name) {
  if (a.max_abs() == 0.0)
    throw Error(errc::invalid_argument, std::string(name) + " must be a non-zero operator");
}

}  // namespace

bool DivergenceValue::is_infinite() const { return std::isinf(value); }

double q_old(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha) {
  check_alpha(alpha);
  check_nonzero_psd(rho, "rho");
  check_nonzero_psd(sigma, "sigma");
  const HermitianOperator ra = power_on_support(rho, alpha);
  const HermitianOperator sb = power_on_support(sigma, 1.0 - alpha);
  return trace_product(ra, sb);
}

double q_new(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha) {
  check_alpha(alpha);
  check_nonzero_psd(rho, "rho");
  check_nonzero_psd(sigma, "sigma");
  const int n = rho.dim();
  if (sigma.dim() != n) throw Error(errc::invalid_argument, "dimension mismatch in q_new");
  const HermitianOperator s = power_on_support(sigma, (1.0 - alpha) / (2.0 * alpha));
  std::vector<cplx> tmp, sand;
  detail::mat_mul(s.entries(), rho.entries(), tmp, n);
  detail::mat_mul(tmp, s.entries(), sand, n);
  HermitianOperator x = detail_make_trusted(n, std::move(sand));
  // Tr X^alpha over the support of the sandwiched operator
  EigenDecomposition ed = eig(x);
  double lmax = 0.0;
  for (double l : ed.eigenvalues) lmax = std::max(lmax, l);
  const double tol = n * 1e-12 * lmax;
  double acc = 0.0;
  for (double l : ed.eigenvalues)
    if (l > tol) acc += std::pow(l, alpha);
  return acc;
}

namespace {

DivergenceValue renyi_from_q(double q, double tr_rho, double alpha, Family fam) {
  DivergenceValue out;
  out.alpha = alpha;
  out.family = fam;
  if (q <= 0.0) {
    // log 0 = -inf; the prefactor sign decides the branch
    out.value = (alpha < 1.0) ? kInf : -kInf;
    return out;
  }
  out.value = (std::log(q) - std::log(tr_rho)) / (alpha - 1.0);
  return out;
}

}  // namespace

DivergenceValue d_old(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha) {
  check_alpha(alpha);
  if (alpha > 1.0 && !support_leq(rho, sigma))
    return DivergenceValue{kInf, alpha, Family::old_renyi};
  return renyi_from_q(q_old(rho, sigma, alpha), rho.trace(), alpha, Family::old_renyi);
}

DivergenceValue d_new(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha) {
  check_alpha(alpha);
  if (alpha > 1.0 && !support_leq(rho, sigma))
    return DivergenceValue{kInf, alpha, Family::new_renyi};
  return renyi_from_q(q_new(rho, sigma, alpha), rho.trace(), alpha, Family::new_renyi);
}

DivergenceValue d_umegaki(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_nonzero_psd(rho, "rho");
  check_nonzero_psd(sigma, "sigma");
  DivergenceValue out;
  out.alpha = 1.0;
  out.family = Family::umegaki;
  if (!support_leq(rho, sigma)) {
    out.value = kInf;
    return out;
  }
  const int n = rho.dim();
  EigenDecomposition er = eig(rho);
  EigenDecomposition es = eig(sigma);
  double rmax = 0.0, smax = 0.0;
  for (double l : er.eigenvalues) rmax = std::max(rmax, l);
  for (double l : es.eigenvalues) smax = std::max(smax, l);
  const double rtol = n * 1e-12 * rmax;
  const double stol = n * 1e-12 * smax;

  double tr_rho = 0.0, tr_rho_log_rho = 0.0;
  for (double l : er.eigenvalues)
    if (l > rtol) {
      tr_rho += l;
      tr_rho_log_rho += l * std::log(l);
    }
  double tr_rho_log_sigma = 0.0;
  for (int c = 0; c < n; ++c) {
    const double mu = es.eigenvalues[c];
    if (mu <= stol) continue;
    // <v_c| rho |v_c>
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      cplx row(0.0, 0.0);
      for (int j = 0; j < n; ++j) row += rho(i, j) * es.eigenvectors[detail::idx(n, j, c)];
      acc += std::conj(es.eigenvectors[detail::idx(n, i, c)]) * row;
    }
    tr_rho_log_sigma += acc.real() * std::log(mu);
  }
  out.value = (tr_rho_log_rho - tr_rho_log_sigma) / tr_rho;
  return out;
}

double renyi_entropy(const HermitianOperator& rho, double alpha) {
  check_alpha(alpha);
  check_nonzero_psd(rho, "rho");
  EigenDecomposition ed = eig(rho);
  double lmax = 0.0;
  for (double l : ed.eigenvalues) lmax = std::max(lmax, l);
  const double tol = rho.dim() * 1e-12 * lmax;
  double tr_a = 0.0, tr = 0.0;
  for (double l : ed.eigenvalues)
    if (l > tol) {
      tr_a += std::pow(l, alpha);
      tr += l;
    }
  return (std::log(tr_a) - std::log(tr)) / (1.0 - alpha);
}

double kappa(const State& rho, const State& sigma) {
  if (!support_leq(rho.op(), sigma.op()))
    throw Error(errc::support_violation, "kappa requires supp rho within supp sigma");
  const double t1 = trace_product(power_on_support(rho.op(), 1.5), power_on_support(sigma.op(), -0.5));
  const double t2 = trace_product(power_on_support(rho.op(), 0.5), power_on_support(sigma.op(), 0.5));
  return std::log(1.0 + t1 + t2);
}

double binary_entropy(double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw Error(errc::invalid_argument, "binary_entropy requires alpha in [0, 1]");
  if (alpha == 0.0 || alpha == 1.0) return 0.0;
  return -alpha * std::log(alpha) - (1.0 - alpha) * std::log(1.0 - alpha);
}

DivergenceValue divergence(Family family, const HermitianOperator& rho, const HermitianOperator& sigma,
                           double alpha) {
  if (family == Family::umegaki || alpha == 1.0) return d_umegaki(rho, sigma);
  if (family == Family::old_renyi) return d_old(rho, sigma, alpha);
  return d_new(rho, sigma, alpha);
}

}  // namespace steinlab
