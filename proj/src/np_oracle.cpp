#include "steinlab/np_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "detail.hpp"

namespace steinlab {

namespace {

using detail::idx;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGapTol = 1e-7;

double frob(const std::vector<cplx>& m) {
  double acc = 0.0;
  for (const cplx& z : m) acc += std::norm(z);
  return std::sqrt(acc);
}

// Gaussian elimination with partial pivoting; a is k x k row-major, b length k.
bool solve_linear(std::vector<double> a, std::vector<double> b, int k, std::vector<double>& out) {
  for (int c = 0; c < k; ++c) {
    int best = c;
    for (int r = c + 1; r < k; ++r)
      if (std::fabs(a[r * k + c]) > std::fabs(a[best * k + c])) best = r;
    if (std::fabs(a[best * k + c]) < 1e-13) return false;
    for (int j = 0; j < k; ++j) std::swap(a[c * k + j], a[best * k + j]);
    std::swap(b[c], b[best]);
    for (int r = c + 1; r < k; ++r) {
      const double f = a[r * k + c] / a[c * k + c];
      if (f == 0.0) continue;
      for (int j = c; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
      b[r] -= f * b[c];
    }
  }
  out.assign(k, 0.0);
  for (int r = k - 1; r >= 0; --r) {
    double acc = b[r];
    for (int j = r + 1; j < k; ++j) acc -= a[r * k + j] * out[j];
    out[r] = acc / a[r * k + r];
  }
  return true;
}

// Ridge-regularized least squares for small systems (rows x cols).
bool least_squares(const std::vector<double>& a, const std::vector<double>& b, int rows, int cols,
                   std::vector<double>& out) {
  std::vector<double> ata(static_cast<std::size_t>(cols) * cols, 0.0), atb(cols, 0.0);
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::fabs(v));
  for (int i = 0; i < cols; ++i) {
    for (int j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (int r = 0; r < rows; ++r) acc += a[r * cols + i] * a[r * cols + j];
      ata[i * cols + j] = acc;
    }
    double acc = 0.0;
    for (int r = 0; r < rows; ++r) acc += a[r * cols + i] * b[r];
    atb[i] = acc;
    ata[i * cols + i] += 1e-12 * std::max(scale * scale, 1.0);
  }
  return solve_linear(ata, atb, cols, out);
}

class DualEngine {
 public:
  DualEngine(const std::vector<HermitianOperator>& nulls, const HermitianOperator& sigma_n, double eps)
      : n_(sigma_n.dim()), k_(static_cast<int>(nulls.size())), eps_(eps) {
    sg_ = sigma_n.entries();
    om_.reserve(k_);
    tr_om_.reserve(k_);
    for (const HermitianOperator& w : nulls) {
      om_.push_back(w.entries());
      tr_om_.push_back(w.trace());
    }
    scale_ = frob(sg_);
    for (const auto& o : om_) scale_ += frob(o);
    detail::set_identity(basis_, n_);
    detail::set_identity(rot_, n_);
    mu_.assign(n_, 0.0);
  }

  int dim() const { return n_; }
  int k() const { return k_; }
  double epsilon() const { return eps_; }
  long evals() const { return evals_; }
  double scale() const { return scale_; }
  double null_trace(int i) const { return tr_om_[i]; }

  double eval(const std::vector<double>& lam) {
    ++evals_;
    work_ = sg_;
    for (int i = 0; i < k_; ++i) {
      const double li = lam[i];
      if (li == 0.0) continue;
      const std::vector<cplx>& o = om_[i];
      for (std::size_t t = 0; t < work_.size(); ++t) work_[t] -= li * o[t];
    }
    detail::set_identity(rot_, n_);
    const int sweeps = detail::jacobi_diagonalize(work_, n_, rot_, 1e-13, 100);
    for (int c = 0; c < n_; ++c) mu_[c] = work_[idx(n_, c, c)].real();
    double tr_neg = 0.0;
    for (double m : mu_)
      if (m < 0.0) tr_neg -= m;
    double sum = 0.0;
    for (double l : lam) sum += l;
    g_ = (1.0 - eps_) * sum - tr_neg;
    if (sweeps > 2 && n_ > 8) fold();
    return g_;
  }

  const std::vector<double>& mu() const { return mu_; }
  double objective() const { return g_; }

  double quad_form(const std::vector<cplx>& a, int col) const {
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n_; ++i) {
      cplx row(0.0, 0.0);
      const cplx* arow = &a[idx(n_, i, 0)];
      for (int j = 0; j < n_; ++j) row += arow[j] * rot_[idx(n_, j, col)];
      acc += std::conj(rot_[idx(n_, i, col)]) * row;
    }
    return acc.real();
  }

  double omega_quad(int i, int col) const { return quad_form(om_[i], col); }
  double sigma_quad(int col) const { return quad_form(sg_, col); }

  double omega_projected(int i, const std::vector<int>& cols, bool complement) const {
    double acc = 0.0;
    for (int c : cols) acc += quad_form(om_[i], c);
    return complement ? tr_om_[i] - acc : acc;
  }

  double sigma_projected(const std::vector<int>& cols) const {
    double acc = 0.0;
    for (int c : cols) acc += quad_form(sg_, c);
    return acc;
  }

  std::vector<double> supergradient() const {
    std::vector<int> neg, rest;
    for (int c = 0; c < n_; ++c) (mu_[c] < 0.0 ? neg : rest).push_back(c);
    const bool use_comp = rest.size() < neg.size();
    const std::vector<int>& cols = use_comp ? rest : neg;
    std::vector<double> sg(k_);
    for (int i = 0; i < k_; ++i) sg[i] = (1.0 - eps_) - omega_projected(i, cols, use_comp);
    return sg;
  }

  void ambient_column(int c, std::vector<cplx>& out) const {
    out.assign(n_, cplx(0.0, 0.0));
    for (int i = 0; i < n_; ++i) {
      cplx acc(0.0, 0.0);
      for (int j = 0; j < n_; ++j) acc += basis_[idx(n_, i, j)] * rot_[idx(n_, j, c)];
      out[i] = acc;
    }
  }

 private:
  void fold() {
    std::vector<cplx> tmp, scratch;
    detail::mat_mul(basis_, rot_, tmp, n_);
    basis_.swap(tmp);
    detail::conjugate_by(sg_, rot_, tmp, n_, scratch);
    sg_.swap(tmp);
    for (auto& o : om_) {
      detail::conjugate_by(o, rot_, tmp, n_, scratch);
      o.swap(tmp);
    }
    detail::set_identity(rot_, n_);
  }

  int n_;
  int k_;
  double eps_;
  std::vector<std::vector<cplx>> om_;
  std::vector<cplx> sg_;
  std::vector<double> tr_om_;
  std::vector<cplx> basis_, rot_, work_;
  std::vector<double> mu_;
  double g_ = 0.0;
  double scale_ = 0.0;
  long evals_ = 0;
};

struct PrimalPick {
  bool found = false;
  std::vector<int> neg_cols;
  std::vector<int> zero_cols;
  std::vector<double> theta;
  double beta_est = kInf;
};

// Recovery ladder at a fixed zero-space tolerance: P_minus alone, one scalar
// weight on the zero eigenspace chosen to make the worst type-I constraint
// tight, then a refined grid (plus kink-vertex candidates) over
// per-eigenvector weights when a single scalar cannot serve every
// constraint.
PrimalPick recover_at_tolerance(const DualEngine& eng, double ztol) {
  const int n = eng.dim();
  const int k = eng.k();
  const double eps = eng.epsilon();
  PrimalPick pick;
  for (int c = 0; c < n; ++c) {
    const double m = eng.mu()[c];
    if (m < -ztol)
      pick.neg_cols.push_back(c);
    else if (m <= ztol)
      pick.zero_cols.push_back(c);
  }
  const int a = static_cast<int>(pick.zero_cols.size());
  if (a > 6) return pick;

  std::vector<int> rest;
  for (int c = 0; c < n; ++c)
    if (eng.mu()[c] >= -ztol) rest.push_back(c);
  const bool use_comp = rest.size() < pick.neg_cols.size();

  std::vector<double> r(k), svals(static_cast<std::size_t>(k) * std::max(a, 1)), zvals(std::max(a, 1));
  for (int i = 0; i < k; ++i) r[i] = eng.omega_projected(i, use_comp ? rest : pick.neg_cols, use_comp);
  for (int ai = 0; ai < a; ++ai) {
    zvals[ai] = std::max(0.0, eng.sigma_quad(pick.zero_cols[ai]));
    for (int i = 0; i < k; ++i) svals[i * a + ai] = std::max(0.0, eng.omega_quad(i, pick.zero_cols[ai]));
  }
  const double beta_base = eng.sigma_projected(pick.neg_cols);

  auto alpha_worst_of = [&](const std::vector<double>& th) {
    double worst = -kInf;
    for (int i = 0; i < k; ++i) {
      double acc = eng.null_trace(i) - r[i];
      for (int ai = 0; ai < a; ++ai) acc -= th[ai] * svals[i * a + ai];
      worst = std::max(worst, acc);
    }
    return worst;
  };
  auto beta_of = [&](const std::vector<double>& th) {
    double acc = beta_base;
    for (int ai = 0; ai < a; ++ai) acc += th[ai] * zvals[ai];
    return acc;
  };
  auto accept = [&](const std::vector<double>& th) {
    const double b = beta_of(th);
    if (!pick.found || b < pick.beta_est) {
      pick.found = true;
      pick.theta = th;
      pick.beta_est = b;
    }
  };

  const double slack = 1e-9;
  {
    std::vector<double> th(a, 0.0);
    if (alpha_worst_of(th) <= eps + slack) accept(th);
  }

  if (a > 0) {
    double gamma = 0.0;
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      double si = 0.0;
      for (int ai = 0; ai < a; ++ai) si += svals[i * a + ai];
      const double excess = eng.null_trace(i) - r[i] - eps;
      if (excess <= slack) continue;
      if (si <= 1e-15) {
        ok = false;
        break;
      }
      gamma = std::max(gamma, excess / si);
    }
    if (ok && gamma <= 1.0 + 1e-12) {
      std::vector<double> g(a, std::min(gamma, 1.0));
      if (alpha_worst_of(g) <= eps + slack) accept(g);
    }
  }

  if (a >= 1 && a <= 3) {
    std::vector<double> lo(a, 0.0), hi(a, 1.0), best;
    double best_beta = kInf;
    for (int round = 0; round < 4; ++round) {
      const int steps = 8;
      std::vector<int> ctr(a, 0);
      for (;;) {
        std::vector<double> cand(a);
        for (int ai = 0; ai < a; ++ai) cand[ai] = lo[ai] + (hi[ai] - lo[ai]) * ctr[ai] / steps;
        if (alpha_worst_of(cand) <= eps + slack) {
          const double b = beta_of(cand);
          if (b < best_beta) {
            best_beta = b;
            best = cand;
          }
        }
        int d = 0;
        while (d < a && ++ctr[d] > steps) ctr[d++] = 0;
        if (d == a) break;
      }
      if (best.empty()) break;
      for (int ai = 0; ai < a; ++ai) {
        const double w = (hi[ai] - lo[ai]) / steps;
        lo[ai] = std::max(0.0, best[ai] - w);
        hi[ai] = std::min(1.0, best[ai] + w);
      }
    }
    if (!best.empty()) accept(best);

    // kink-vertex candidates: choose |zero| tight conditions among the
    // type-I constraints and the box bounds
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < k; ++i) {
      std::vector<double> row(a + 1);
      for (int ai = 0; ai < a; ++ai) row[ai] = svals[i * a + ai];
      row[a] = eng.null_trace(i) - r[i] - eps;
      rows.push_back(row);
    }
    for (int ai = 0; ai < a; ++ai) {
      std::vector<double> row(a + 1, 0.0);
      row[ai] = 1.0;
      row[a] = 0.0;
      rows.push_back(row);
      row[a] = 1.0;
      rows.push_back(row);
    }
    const int total = static_cast<int>(rows.size());
    std::vector<int> sel(a);
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == a) {
        std::vector<double> mat(static_cast<std::size_t>(a) * a), rhs(a), sol;
        for (int d = 0; d < a; ++d) {
          for (int ai = 0; ai < a; ++ai) mat[d * a + ai] = rows[sel[d]][ai];
          rhs[d] = rows[sel[d]][a];
        }
        if (!solve_linear(mat, rhs, a, sol)) return;
        for (double& v : sol) v = std::clamp(v, 0.0, 1.0);
        if (alpha_worst_of(sol) <= eps + slack) accept(sol);
        return;
      }
      for (int t = start; t < total; ++t) {
        sel[depth] = t;
        rec(t + 1, depth + 1);
      }
    };
    if (a > 0) rec(0, 0);
  }

  return pick;
}

struct FinalPrimal {
  bool recovered = false;
  HermitianOperator t0 = HermitianOperator::identity(1);
  double alpha_worst = 0.0;
  double beta = 1.0;
};

FinalPrimal materialize_primal(const DualEngine& eng, const PrimalPick& pick,
                               const std::vector<HermitianOperator>& nulls,
                               const HermitianOperator& sigma_n) {
  const int n = eng.dim();
  std::vector<cplx> t0(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  std::vector<cplx> col;
  auto add_column = [&](int c, double w) {
    eng.ambient_column(c, col);
    for (int i = 0; i < n; ++i) {
      const cplx wi = w * col[i];
      for (int j = 0; j <= i; ++j) t0[idx(n, i, j)] += wi * std::conj(col[j]);
    }
  };
  for (int c : pick.neg_cols) add_column(c, 1.0);
  for (std::size_t ai = 0; ai < pick.zero_cols.size(); ++ai)
    if (pick.theta[ai] > 0.0) add_column(pick.zero_cols[ai], pick.theta[ai]);
  for (int i = 0; i < n; ++i) {
    t0[idx(n, i, i)] = cplx(t0[idx(n, i, i)].real(), 0.0);
    for (int j = 0; j < i; ++j) t0[idx(n, j, i)] = std::conj(t0[idx(n, i, j)]);
  }

  FinalPrimal fin;
  fin.t0 = detail_make_trusted(n, std::move(t0));
  const BinaryTest test{fin.t0};
  const auto [aw, b] = type_errors(test, nulls, sigma_n);
  fin.alpha_worst = aw;
  fin.beta = b;
  fin.recovered = true;
  return fin;
}

// Golden-section maximization over [0, hi]; returns the best point seen.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double hi, int iters,
                                     double f0) {
  const double invphi = 0.6180339887498949;
  double a = 0.0, b = hi;
  double best_x = 0.0, best_f = f0;
  auto note = [&](double x, double v) {
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  };
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  note(x1, f1);
  note(x2, f2);
  for (int it = 0; it < iters; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
      note(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
      note(x2, f2);
    }
  }
  return {best_x, best_f};
}

}  // namespace

double dual_value(const std::vector<double>& lambdas, const std::vector<HermitianOperator>& nulls,
                  const HermitianOperator& sigma_n, double epsilon) {
  if (lambdas.size() != nulls.size())
    throw Error(errc::invalid_argument, "dual_value: multiplier count must match null count");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(errc::invalid_argument, "epsilon must lie in (0, 1)");
  HermitianOperator m = sigma_n;
  double sum = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0) throw Error(errc::invalid_argument, "multipliers must be >= 0");
    m = m - (lambdas[i] * nulls[i]);
    sum += lambdas[i];
  }
  return (1.0 - epsilon) * sum - negative_part_trace(m);
}

std::pair<double, double> type_errors(const BinaryTest& test, const std::vector<HermitianOperator>& nulls,
                                      const HermitianOperator& sigma_n) {
  double worst = 0.0;
  for (const HermitianOperator& w : nulls)
    worst = std::max(worst, w.trace() - trace_product(w, test.t0));
  return {worst, trace_product(sigma_n, test.t0)};
}

DualSolution beta_exact(const std::vector<HermitianOperator>& nulls, const HermitianOperator& sigma_n,
                        double epsilon, std::uint64_t seed) {
  const int k = static_cast<int>(nulls.size());
  if (k < 1 || k > 8) throw Error(errc::invalid_argument, "beta_exact supports 1..8 null operators");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(errc::invalid_argument, "epsilon must lie in (0, 1)");
  for (const HermitianOperator& w : nulls)
    if (w.dim() != sigma_n.dim()) throw Error(errc::invalid_argument, "beta_exact: dimension mismatch");

  DualEngine eng(nulls, sigma_n, epsilon);
  const int n = eng.dim();
  const bool big = n > 64;
  const long eval_budget = big ? 4000 : 100000;
  const int line_iters = big ? 34 : 56;

  detail::RandomSource rng(seed ^ 0x5eed5eedULL);

  std::vector<double> best_lam(k, 0.0);
  double best_g = -kInf;
  auto consider = [&](const std::vector<double>& l, double g) {
    if (g > best_g) {
      best_g = g;
      best_lam = l;
    }
  };

  // maximize g along base + t * dir, t in [0, cap]; base is a snapshot
  auto line_search = [&](const std::vector<double>& dir, double cap) {
    const std::vector<double> base = best_lam;
    double hard = cap;
    for (int i = 0; i < k; ++i)
      if (dir[i] < 0.0) hard = std::min(hard, base[i] / (-dir[i]));
    if (!(hard > 0.0)) return 0.0;
    std::vector<double> probe(k);
    auto at = [&](double t) {
      for (int i = 0; i < k; ++i) probe[i] = std::max(0.0, base[i] + t * dir[i]);
      const double g = eng.eval(probe);
      consider(probe, g);
      return g;
    };
    const double before = best_g;
    double hi = std::min(1.0, hard);
    double prev = at(hi);
    while (hi < hard && eng.evals() < eval_budget) {
      const double nxt = std::min(hard, hi * 2.0);
      const double v = at(nxt);
      hi = nxt;
      if (v <= prev) break;
      prev = v;
    }
    golden_max([&](double t) { return at(t); }, hi, line_iters, before);
    return best_g - before;
  };

  // freeze near-null eigenvectors at the incumbent and solve the linearized
  // zero-crossing conditions for the multipliers
  auto active_set_polish = [&]() {
    consider(best_lam, eng.eval(best_lam));
    const std::vector<double> anchor = best_lam;
    const double zscale = std::max(eng.scale(), 1.0);
    for (double zf : {1e-9, 1e-7, 1e-5, 1e-3}) {
      const double zt = zf * zscale;
      std::vector<int> zero_cols;
      for (int c = 0; c < n; ++c)
        if (std::fabs(eng.mu()[c]) <= zt) zero_cols.push_back(c);
      const int a = static_cast<int>(zero_cols.size());
      if (a == 0 || a > 8) continue;
      // rows: sum_i delta_i w_ai = s_a - sum_i anchor_i w_ai
      std::vector<double> mat(static_cast<std::size_t>(a) * k), rhs(a), delta;
      for (int ai = 0; ai < a; ++ai) {
        double lhs0 = 0.0;
        for (int i = 0; i < k; ++i) {
          mat[ai * k + i] = eng.omega_quad(i, zero_cols[ai]);
          lhs0 += anchor[i] * mat[ai * k + i];
        }
        rhs[ai] = eng.sigma_quad(zero_cols[ai]) - lhs0;
      }
      bool solved = (a == k) ? solve_linear(mat, rhs, k, delta) : least_squares(mat, rhs, a, k, delta);
      if (!solved) continue;
      std::vector<double> cand(k);
      bool ok = true;
      for (int i = 0; i < k; ++i) {
        if (!std::isfinite(delta[i])) ok = false;
        cand[i] = std::max(0.0, anchor[i] + delta[i]);
      }
      if (!ok) continue;
      consider(cand, eng.eval(cand));
      consider(best_lam, eng.eval(best_lam));
      if (eng.evals() > eval_budget) break;
    }
  };

  // gap estimate at the incumbent (rotated-basis traces)
  auto gap_estimate = [&]() {
    consider(best_lam, eng.eval(best_lam));
    const double g_here = eng.objective();
    const double zscale = std::max(eng.scale(), 1.0);
    double best_gap = kInf;
    for (double zf : {1e-12, 1e-10, 1e-8, 1e-6, 1e-5}) {
      PrimalPick p = recover_at_tolerance(eng, zf * zscale);
      if (p.found) best_gap = std::min(best_gap, p.beta_est - g_here);
      if (best_gap <= kGapTol * 0.5) break;
    }
    return best_gap;
  };

  {
    std::vector<double> start(k, 1.0 / k);
    consider(start, eng.eval(start));
  }

  if (k == 1) {
    std::vector<double> zerolam{0.0};
    consider(zerolam, eng.eval(zerolam));
    best_lam = zerolam;
    best_g = eng.objective();
    line_search({1.0}, 1e14);
    for (int polish = 0; polish < 3; ++polish) {
      active_set_polish();
      if (gap_estimate() <= kGapTol) break;
      // re-search near the incumbent at a finer scale
      const double w = std::max(best_lam[0] * 1e-2, 1e-9);
      line_search({w}, 2.0);
      line_search({-w}, 2.0);
    }
  } else {
    // diminishing-step projected supergradient ascent from the uniform point
    std::vector<double> cur(k, 1.0 / k);
    const int ta = big ? 24 : 160;
    const double s0 = 0.5;
    for (int t = 1; t <= ta && eng.evals() < eval_budget; ++t) {
      consider(cur, eng.eval(cur));
      std::vector<double> sg = eng.supergradient();
      double nrm = 0.0;
      for (int i = 0; i < k; ++i) {
        if (cur[i] <= 0.0 && sg[i] < 0.0) sg[i] = 0.0;
        nrm += sg[i] * sg[i];
      }
      nrm = std::sqrt(nrm);
      if (nrm < 1e-14) break;
      const double step = s0 / std::sqrt(static_cast<double>(t));
      for (int i = 0; i < k; ++i) cur[i] = std::max(0.0, cur[i] + step * sg[i] / nrm);
    }
    consider(cur, eng.eval(cur));

    const int max_rounds = big ? 5 : 40;
    for (int round = 0; round < max_rounds && eng.evals() < eval_budget; ++round) {
      double improved = 0.0;
      for (int i = 0; i < k; ++i) {
        std::vector<double> dir(k, 0.0);
        dir[i] = std::max(1.0, best_lam[i]);
        improved += line_search(dir, 1e14);
        dir[i] = -dir[i];
        improved += line_search(dir, 1e14);
      }
      {
        std::vector<double> dir = best_lam;
        double nz = 0.0;
        for (double v : dir) nz += v;
        if (nz > 1e-14) {
          improved += line_search(dir, 1e14);
          for (double& v : dir) v = -v;
          improved += line_search(dir, 0.999);
        }
      }
      {
        consider(best_lam, eng.eval(best_lam));
        std::vector<double> sg = eng.supergradient();
        for (int i = 0; i < k; ++i)
          if (best_lam[i] <= 0.0 && sg[i] < 0.0) sg[i] = 0.0;
        double nrm = 0.0;
        for (double v : sg) nrm += v * v;
        if (nrm > 1e-20) improved += line_search(sg, 1e14);
      }
      const int nrand = big ? 1 : 2;
      for (int rd = 0; rd < nrand; ++rd) {
        std::vector<double> dir(k);
        for (int i = 0; i < k; ++i) dir[i] = rng.normal();
        improved += line_search(dir, 1e14);
      }

      active_set_polish();
      if (gap_estimate() <= kGapTol) break;
      if (improved <= 1e-14 && round >= 1) break;
    }
  }

  DualSolution sol;
  sol.lambdas = best_lam;

  // final certificates; ambient recomputation keeps them independent of the
  // engine's rotated cache
  consider(best_lam, eng.eval(best_lam));
  sol.dual_value = (n <= 64) ? dual_value(best_lam, nulls, sigma_n, epsilon) : eng.objective();

  FinalPrimal fin;
  const double zscale = std::max(eng.scale(), 1.0);
  for (double zf : {1e-12, 1e-10, 1e-8, 1e-6, 1e-5}) {
    PrimalPick p = recover_at_tolerance(eng, zf * zscale);
    if (!p.found) continue;
    FinalPrimal cand = materialize_primal(eng, p, nulls, sigma_n);
    if (cand.alpha_worst > epsilon + 1e-8) continue;
    if (!fin.recovered || cand.beta < fin.beta) fin = cand;
    if (fin.recovered && fin.beta - sol.dual_value <= kGapTol * 0.5) break;
  }
  if (!fin.recovered) {
    fin.t0 = HermitianOperator::identity(n);
    fin.alpha_worst = 0.0;
    fin.beta = sigma_n.trace();
  }
  sol.primal_recovered = fin.recovered;
  sol.primal_test = BinaryTest{fin.t0};
  sol.primal_value = fin.beta;
  sol.gap = sol.primal_value - sol.dual_value;
  sol.certified = sol.primal_recovered && sol.gap <= kGapTol && sol.gap >= -1e-9;
  sol.iterations = eng.evals();
  return sol;
}

double classical_np(const std::vector<std::vector<double>>& p_list, const std::vector<double>& q,
                    double epsilon) {
  if (p_list.empty()) throw Error(errc::invalid_argument, "classical_np requires at least one null");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(errc::invalid_argument, "epsilon must lie in (0, 1)");
  const int m = static_cast<int>(q.size());
  const int k = static_cast<int>(p_list.size());
  auto check_vec = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != m)
      throw Error(errc::invalid_argument, std::string(name) + ": outcome count mismatch");
    double sum = 0.0;
    for (double x : v) {
      if (x < -1e-12) throw Error(errc::invalid_argument, std::string(name) + ": negative probability");
      sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw Error(errc::invalid_argument, std::string(name) + ": probabilities must sum to 1");
  };
  check_vec(q, "q");
  for (const auto& p : p_list) check_vec(p, "p");

  if (k == 1) {
    const std::vector<double>& p = p_list[0];
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    auto ratio = [&](int j) {
      if (q[j] <= 0.0) return (p[j] > 0.0) ? kInf : -1.0;
      return p[j] / q[j];
    };
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return ratio(x) > ratio(y); });
    const double need = 1.0 - epsilon;
    double acc = 0.0, beta = 0.0;
    for (int j : order) {
      if (acc >= need - 1e-15) break;
      if (p[j] <= 0.0) continue;
      const double take = std::min(1.0, (need - acc) / p[j]);
      beta += take * q[j];
      acc += take * p[j];
    }
    return beta;
  }

  // the same dual over diagonal matrices:
  //   maximize (1-eps) sum_i lambda_i - sum_j max(0, sum_i lambda_i p_ij - q_j)
  // solved exactly at the vertices of the kink arrangement
  auto g_of = [&](const std::vector<double>& lam) {
    double val = 0.0;
    for (double l : lam) val += (1.0 - epsilon) * l;
    for (int j = 0; j < m; ++j) {
      double t = -q[j];
      for (int i = 0; i < k; ++i) t += lam[i] * p_list[i][j];
      if (t > 0.0) val -= t;
    }
    return val;
  };

  const int planes = m + k;
  long combos = 1;
  for (int i = 0; i < k; ++i) combos = combos * (planes - i) / (i + 1);
  if (combos > 2000000)
    throw Error(errc::invalid_argument, "classical_np: arrangement too large for exact enumeration");

  double best = 0.0;  // lambda = 0
  std::vector<int> sel(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      std::vector<double> mat(static_cast<std::size_t>(k) * k, 0.0), rhs(k, 0.0), sol;
      for (int d = 0; d < k; ++d) {
        const int pl = sel[d];
        if (pl < m) {
          for (int i = 0; i < k; ++i) mat[d * k + i] = p_list[i][pl];
          rhs[d] = q[pl];
        } else {
          mat[d * k + (pl - m)] = 1.0;
          rhs[d] = 0.0;
        }
      }
      if (!solve_linear(mat, rhs, k, sol)) return;
      for (double& v : sol) {
        if (!std::isfinite(v) || v < -1e-10) return;
        v = std::max(0.0, v);
      }
      best = std::max(best, g_of(sol));
      return;
    }
    for (int t = start; t < planes; ++t) {
      sel[depth] = t;
      rec(t + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace steinlab
