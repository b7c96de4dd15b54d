#include "steinlab/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "detail.hpp"

namespace steinlab {

namespace detail {

void mat_mul(const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<cplx>& out, int dim) {
  out.assign(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) {
      const cplx aik = a[idx(dim, i, k)];
      if (aik == cplx(0.0, 0.0)) continue;
      const cplx* brow = &b[idx(dim, k, 0)];
      cplx* orow = &out[idx(dim, i, 0)];
      for (int j = 0; j < dim; ++j) orow[j] += aik * brow[j];
    }
  }
}

void conjugate_by(const std::vector<cplx>& a, const std::vector<cplx>& v, std::vector<cplx>& out,
                  int dim, std::vector<cplx>& scratch) {
  // scratch = a v
  mat_mul(a, v, scratch, dim);
  // out = v^dagger scratch
  out.assign(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) {
      const cplx vki = std::conj(v[idx(dim, k, i)]);
      if (vki == cplx(0.0, 0.0)) continue;
      const cplx* srow = &scratch[idx(dim, k, 0)];
      cplx* orow = &out[idx(dim, i, 0)];
      for (int j = 0; j < dim; ++j) orow[j] += vki * srow[j];
    }
  }
}

double off_diagonal_frobenius(const std::vector<cplx>& m, int dim) {
  double acc = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (i != j) acc += std::norm(m[idx(dim, i, j)]);
  return std::sqrt(acc);
}

int jacobi_diagonalize(std::vector<cplx>& m, int dim, std::vector<cplx>& v, double rel_tol,
                       int max_sweeps) {
  if (dim == 1) {
    return 0;
  }
  double norm_a = 0.0;
  for (const cplx& z : m) norm_a += std::norm(z);
  norm_a = std::sqrt(norm_a);
  if (norm_a == 0.0) return 0;
  const double conv = rel_tol * norm_a;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off1 = 0.0;
    for (int p = 0; p < dim; ++p)
      for (int q = p + 1; q < dim; ++q) off1 += std::abs(m[idx(dim, p, q)]);
    if (off_diagonal_frobenius(m, dim) <= conv) break;
    const double tresh = (sweep < 3) ? 0.2 * off1 / (static_cast<double>(dim) * dim) : 0.0;

    for (int p = 0; p < dim; ++p) {
      for (int q = p + 1; q < dim; ++q) {
        const cplx z = m[idx(dim, p, q)];
        const double az = std::abs(z);
        const double app = m[idx(dim, p, p)].real();
        const double aqq = m[idx(dim, q, q)].real();
        if (az <= 1e-16 * (std::fabs(app) + std::fabs(aqq))) {
          m[idx(dim, p, q)] = 0.0;
          m[idx(dim, q, p)] = 0.0;
          continue;
        }
        if (az <= tresh) continue;

        const double tau = (app - aqq) / (2.0 * az);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx phase = z / az;
        const cplx g = s * phase;
        const cplx gc = std::conj(g);

        // rows p, q: (row_p, row_q) <- (c row_p + g row_q, -conj(g) row_p + c row_q)
        cplx* rp = &m[idx(dim, p, 0)];
        cplx* rq = &m[idx(dim, q, 0)];
        for (int j = 0; j < dim; ++j) {
          const cplx mp = rp[j], mq = rq[j];
          rp[j] = c * mp + g * mq;
          rq[j] = -gc * mp + c * mq;
        }
        // cols p, q: (col_p, col_q) <- (c col_p + conj(g) col_q, -g col_p + c col_q)
        for (int i = 0; i < dim; ++i) {
          cplx& mp = m[idx(dim, i, p)];
          cplx& mq = m[idx(dim, i, q)];
          const cplx a0 = mp, b0 = mq;
          mp = c * a0 + gc * b0;
          mq = -g * a0 + c * b0;
        }
        m[idx(dim, p, q)] = 0.0;
        m[idx(dim, q, p)] = 0.0;
        m[idx(dim, p, p)] = cplx(m[idx(dim, p, p)].real(), 0.0);
        m[idx(dim, q, q)] = cplx(m[idx(dim, q, q)].real(), 0.0);

        // eigenvector accumulation: V <- V J
        cplx* vb = v.data();
        for (int i = 0; i < dim; ++i) {
          cplx& vp = vb[idx(dim, i, p)];
          cplx& vq = vb[idx(dim, i, q)];
          const cplx a0 = vp, b0 = vq;
          vp = c * a0 + gc * b0;
          vq = -g * a0 + c * b0;
        }
      }
    }
  }
  if (sweep >= max_sweeps) {
    throw Error(errc::internal, "jacobi_diagonalize: no convergence after " +
                                    std::to_string(max_sweeps) + " sweeps");
  }
  return sweep;
}

std::uint64_t RandomSource::next_u64() {
  // splitmix64
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomSource::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomSource::normal() {
  if (have_cached) {
    have_cached = false;
    return cached;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  cached = r * std::sin(a);
  have_cached = true;
  return r * std::cos(a);
}

}  // namespace detail

using detail::idx;

HermitianOperator::HermitianOperator(int dim, std::vector<cplx> entries) : dim_(dim), entries_(std::move(entries)) {
  if (dim_ < 1) throw Error(errc::invalid_argument, "operator dimension must be >= 1");
  if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw Error(errc::invalid_argument, "entry count does not match dim*dim");
  double maxabs = 0.0;
  for (const cplx& z : entries_) maxabs = std::max(maxabs, std::abs(z));
  double max_asym = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      max_asym = std::max(max_asym, std::abs(entries_[idx(dim_, i, j)] - std::conj(entries_[idx(dim_, j, i)])));
  if (max_asym > 1e-12 * std::max(maxabs, 1e-300))
    throw Error(errc::not_hermitian,
                "matrix is not Hermitian: max |A - A^dagger| = " + std::to_string(max_asym));
  // store the exactly Hermitian part
  for (int i = 0; i < dim_; ++i) {
    entries_[idx(dim_, i, i)] = cplx(entries_[idx(dim_, i, i)].real(), 0.0);
    for (int j = i + 1; j < dim_; ++j) {
      const cplx sym = 0.5 * (entries_[idx(dim_, i, j)] + std::conj(entries_[idx(dim_, j, i)]));
      entries_[idx(dim_, i, j)] = sym;
      entries_[idx(dim_, j, i)] = std::conj(sym);
    }
  }
}

HermitianOperator::HermitianOperator(int dim, std::vector<cplx> entries, trusted_tag)
    : dim_(dim), entries_(std::move(entries)) {}

HermitianOperator detail_make_trusted(int dim, std::vector<cplx>&& entries) {
  return HermitianOperator(dim, std::move(entries), HermitianOperator::trusted_tag{});
}

HermitianOperator HermitianOperator::identity(int dim) {
  std::vector<cplx> e(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
  for (int i = 0; i < dim; ++i) e[idx(dim, i, i)] = 1.0;
  return detail_make_trusted(dim, std::move(e));
}

HermitianOperator HermitianOperator::zero(int dim) {
  if (dim < 1) throw Error(errc::invalid_argument, "operator dimension must be >= 1");
  return detail_make_trusted(dim, std::vector<cplx>(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0)));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& d) {
  const int dim = static_cast<int>(d.size());
  if (dim < 1) throw Error(errc::invalid_argument, "operator dimension must be >= 1");
  std::vector<cplx> e(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
  for (int i = 0; i < dim; ++i) e[idx(dim, i, i)] = d[i];
  return detail_make_trusted(dim, std::move(e));
}

double HermitianOperator::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += entries_[idx(dim_, i, i)].real();
  return t;
}

double HermitianOperator::max_abs() const {
  double m = 0.0;
  for (const cplx& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

double HermitianOperator::frobenius_norm() const {
  double acc = 0.0;
  for (const cplx& z : entries_) acc += std::norm(z);
  return std::sqrt(acc);
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw Error(errc::invalid_argument, "dimension mismatch in operator sum");
  std::vector<cplx> e = a.entries();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.entries()[i];
  return detail_make_trusted(a.dim(), std::move(e));
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw Error(errc::invalid_argument, "dimension mismatch in operator difference");
  std::vector<cplx> e = a.entries();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.entries()[i];
  return detail_make_trusted(a.dim(), std::move(e));
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  std::vector<cplx> e = a.entries();
  for (cplx& z : e) z *= s;
  return detail_make_trusted(a.dim(), std::move(e));
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw Error(errc::invalid_argument, "dimension mismatch in trace_product");
  // Tr(AB) = sum_ij A_ij conj(B_ij) for Hermitian B
  double acc = 0.0;
  const std::vector<cplx>& ae = a.entries();
  const std::vector<cplx>& be = b.entries();
  for (std::size_t i = 0; i < ae.size(); ++i)
    acc += ae[i].real() * be[i].real() + ae[i].imag() * be[i].imag();
  return acc;
}

EigenDecomposition eig(const HermitianOperator& a) {
  const int n = a.dim();
  std::vector<cplx> m = a.entries();
  std::vector<cplx> v;
  detail::set_identity(v, n);
  detail::jacobi_diagonalize(m, n, v, 1e-13, 100);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = m[idx(n, i, i)].real();
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

  EigenDecomposition out;
  out.dim = n;
  out.eigenvalues.resize(n);
  out.eigenvectors.assign(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  for (int c = 0; c < n; ++c) {
    out.eigenvalues[c] = diag[order[c]];
    for (int r = 0; r < n; ++r) out.eigenvectors[idx(n, r, c)] = v[idx(n, r, order[c])];
  }
  return out;
}

namespace {

// Rebuild sum_i f(lambda_i) v_i v_i^dagger over selected eigenpairs.
HermitianOperator rebuild(const EigenDecomposition& ed, const std::vector<double>& coeff) {
  const int n = ed.dim;
  std::vector<cplx> out(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  for (int c = 0; c < n; ++c) {
    if (coeff[c] == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx vi = coeff[c] * ed.eigenvectors[idx(n, i, c)];
      for (int j = 0; j < n; ++j) out[idx(n, i, j)] += vi * std::conj(ed.eigenvectors[idx(n, j, c)]);
    }
  }
  return detail_make_trusted(n, std::move(out));
}

double support_threshold(int dim, double lambda_max) {
  return static_cast<double>(dim) * 1e-12 * std::max(lambda_max, 0.0);
}

void check_psd_clip(std::vector<double>& ev) {
  for (double& l : ev) {
    if (l < -1e-10)
      throw Error(errc::not_psd, "operator is not positive semidefinite: eigenvalue " + std::to_string(l));
    if (l < 0.0) l = 0.0;
  }
}

}  // namespace

HermitianOperator power_on_support(const HermitianOperator& a, double alpha) {
  EigenDecomposition ed = eig(a);
  check_psd_clip(ed.eigenvalues);
  const double lmax = ed.eigenvalues.back();
  const double tol = support_threshold(a.dim(), lmax);
  std::vector<double> coeff(a.dim(), 0.0);
  for (int i = 0; i < a.dim(); ++i) {
    const double l = ed.eigenvalues[i];
    if (l > tol) coeff[i] = (alpha == 0.0) ? 1.0 : std::pow(l, alpha);
  }
  return rebuild(ed, coeff);
}

double negative_part_trace(const HermitianOperator& a) {
  EigenDecomposition ed = eig(a);
  double acc = 0.0;
  for (double l : ed.eigenvalues)
    if (l < 0.0) acc -= l;
  return acc;
}

double trace_norm(const HermitianOperator& a) {
  EigenDecomposition ed = eig(a);
  double acc = 0.0;
  for (double l : ed.eigenvalues) acc += std::fabs(l);
  return acc;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  const int na = a.dim(), nb = b.dim();
  const int n = na * nb;
  std::vector<cplx> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      const cplx aij = a(i, j);
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l)
          e[idx(n, i * nb + k, j * nb + l)] = aij * b(k, l);
    }
  return detail_make_trusted(n, std::move(e));
}

HermitianOperator kron_power(const HermitianOperator& a, int n, std::uint64_t dim_cap) {
  if (n < 1) throw Error(errc::invalid_argument, "kron_power requires n >= 1");
  const std::uint64_t d = static_cast<std::uint64_t>(a.dim());
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > dim_cap / d)
      throw Error(errc::resource_cap, "kron_power: dim^" + std::to_string(n) + " exceeds cap " +
                                          std::to_string(dim_cap));
    total *= d;
  }
  HermitianOperator out = a;
  for (int i = 1; i < n; ++i) out = kron(out, a);
  return out;
}

bool support_leq(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw Error(errc::invalid_argument, "dimension mismatch in support_leq");
  const int n = a.dim();
  EigenDecomposition eb = eig(b);
  check_psd_clip(eb.eigenvalues);
  const double btol = support_threshold(n, eb.eigenvalues.back());
  // Q = I - B^0
  std::vector<double> qcoeff(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (eb.eigenvalues[i] <= btol) qcoeff[i] = 1.0;
  HermitianOperator q = rebuild(eb, qcoeff);

  EigenDecomposition ea = eig(a);
  check_psd_clip(ea.eigenvalues);
  const double amax = ea.eigenvalues.back();
  if (amax == 0.0) return true;

  // || Q A Q || via largest eigenvalue of the PSD compression
  const std::vector<cplx>& qe = q.entries();
  std::vector<cplx> tmp, qaq;
  detail::mat_mul(qe, a.entries(), tmp, n);
  detail::mat_mul(tmp, qe, qaq, n);
  HermitianOperator comp = detail_make_trusted(n, std::move(qaq));
  EigenDecomposition ec = eig(comp);
  const double largest = std::fabs(ec.eigenvalues.back());
  return largest <= std::max(support_threshold(n, amax), 1e-13);
}

State::State(HermitianOperator op) : op_(std::move(op)) {
  EigenDecomposition ed = eig(op_);
  if (ed.eigenvalues.front() < -1e-10)
    throw Error(errc::not_psd,
                "state has eigenvalue " + std::to_string(ed.eigenvalues.front()) + " below -1e-10");
  const double tr = op_.trace();
  if (std::fabs(tr - 1.0) > 1e-10)
    throw Error(errc::invalid_argument, "state trace " + std::to_string(tr) + " is not 1");
}

State State::random(int dim, std::uint64_t seed) {
  if (dim < 1) throw Error(errc::invalid_argument, "state dimension must be >= 1");
  detail::RandomSource rng(seed);
  for (;;) {
    std::vector<cplx> g(static_cast<std::size_t>(dim) * dim);
    for (cplx& z : g) z = cplx(rng.normal(), rng.normal()) * 0.7071067811865476;
    // M = G G^dagger
    std::vector<cplx> m(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        cplx acc(0.0, 0.0);
        for (int k = 0; k < dim; ++k) acc += g[idx(dim, i, k)] * std::conj(g[idx(dim, j, k)]);
        m[idx(dim, i, j)] = acc;
      }
    double tr = 0.0;
    for (int i = 0; i < dim; ++i) tr += m[idx(dim, i, i)].real();
    if (tr < 1e-290) continue;
    for (cplx& z : m) z /= tr;
    for (int i = 0; i < dim; ++i) m[idx(dim, i, i)] = cplx(m[idx(dim, i, i)].real(), 0.0);
    return State(detail_make_trusted(dim, std::move(m)), trusted_tag{});
  }
}

State State::tensor_power(int n, std::uint64_t dim_cap) const {
  return State(kron_power(op_, n, dim_cap), trusted_tag{});
}

double trace_distance(const State& a, const State& b) { return trace_norm(a.op() - b.op()); }

namespace {

std::vector<std::string> tokenize_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, path + ": cannot open for reading");
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

double parse_double(const std::string& tok, const std::string& where, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw Error(errc::parse_error, path + ": field " + where + ": cannot parse '" + tok + "' as a real number");
  return v;
}

}  // namespace

HermitianOperator load_operator(const std::string& path) {
  const std::vector<std::string> toks = tokenize_file(path);
  std::size_t pos = 0;
  auto need = [&](const char* what) -> const std::string& {
    if (pos >= toks.size()) throw Error(errc::parse_error, path + ": unexpected end of file, expected " + std::string(what));
    return toks[pos++];
  };
  if (need("'dim'") != "dim") throw Error(errc::parse_error, path + ": expected leading 'dim' keyword");
  const std::string& dtok = need("dimension value");
  char* end = nullptr;
  const long dim = std::strtol(dtok.c_str(), &end, 10);
  if (end == dtok.c_str() || *end != '\0' || dim < 1 || dim > 65536)
    throw Error(errc::parse_error, path + ": field dim: invalid dimension '" + dtok + "'");
  const int n = static_cast<int>(dim);

  if (need("'re'") != "re") throw Error(errc::parse_error, path + ": expected 're' block after dim");
  std::vector<double> re(static_cast<std::size_t>(n) * n), im(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::string where = "re[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      re[idx(n, i, j)] = parse_double(need(where.c_str()), where, path);
    }
  if (need("'im'") != "im") throw Error(errc::parse_error, path + ": expected 'im' block after re");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::string where = "im[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      im[idx(n, i, j)] = parse_double(need(where.c_str()), where, path);
    }
  if (pos != toks.size()) throw Error(errc::parse_error, path + ": trailing content after im block");

  std::vector<cplx> e(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = cplx(re[i], im[i]);
  try {
    return HermitianOperator(n, std::move(e));
  } catch (const Error& err) {
    throw Error(err.code(), path + ": " + err.what());
  }
}

void save_operator(const HermitianOperator& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(errc::io_error, path + ": cannot open for writing");
  const int n = a.dim();
  char buf[64];
  out << "dim " << n << "\n";
  out << "re\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j).real());
      out << buf << (j + 1 == n ? "" : " ");
    }
    out << "\n";
  }
  out << "im\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j).imag());
      out << buf << (j + 1 == n ? "" : " ");
    }
    out << "\n";
  }
  if (!out) throw Error(errc::io_error, path + ": write failed");
}

std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "INF" : "-INF";
  if (x == 0.0) return "0";
  char buf[64];
  if (std::fabs(x) < 1e-4)
    std::snprintf(buf, sizeof buf, "%.11e", x);
  else
    std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace steinlab
