#include "steinlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "detail.hpp"

namespace steinlab::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates inequality slacks: a check passes when slack >= -tol.
struct Checker {
  PropertyResult res;
  double tol;

  Checker(std::string name, double tolerance) : tol(tolerance) {
    res.name = std::move(name);
    res.worst_margin = kInf;
  }

  void slack(double s, const std::string& what) {
    ++res.cases;
    res.worst_margin = std::min(res.worst_margin, s);
    if (s < -tol) {
      ++res.failures;
      if (res.note.empty()) res.note = what + " slack " + format_value(s);
    }
  }

  void require(bool ok, const std::string& what) { slack(ok ? 0.0 : -1.0, what); }

  PropertyResult done() {
    if (res.cases == 0) res.worst_margin = 0.0;
    return res;
  }
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  detail::RandomSource r(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
  return r.next_u64();
}

}  // namespace

HermitianOperator random_hermitian(int dim, std::uint64_t seed) {
  detail::RandomSource rng(seed);
  std::vector<cplx> e(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    e[detail::idx(dim, i, i)] = cplx(rng.normal(), 0.0);
    for (int j = i + 1; j < dim; ++j) {
      const cplx z(0.7071067811865476 * rng.normal(), 0.7071067811865476 * rng.normal());
      e[detail::idx(dim, i, j)] = z;
      e[detail::idx(dim, j, i)] = std::conj(z);
    }
  }
  return HermitianOperator(dim, std::move(e));
}

HermitianOperator random_psd(int dim, std::uint64_t seed) {
  State s = State::random(dim, seed);
  detail::RandomSource rng(seed ^ 0xabcdULL);
  const double scale = 0.25 + 2.0 * rng.uniform();
  return scale * s.op();
}

State random_full_rank_state(int dim, std::uint64_t seed, double floor_mix) {
  State w = State::random(dim, seed);
  if (floor_mix <= 0.0) return w;
  std::vector<double> unif(dim, 1.0 / dim);
  HermitianOperator mixed =
      (1.0 - floor_mix) * w.op() + floor_mix * HermitianOperator::diagonal(unif);
  return State(mixed);
}

std::vector<double> random_probability_vector(int m, std::uint64_t seed, double floor) {
  detail::RandomSource rng(seed);
  std::vector<double> p(m);
  double sum = 0.0;
  for (double& x : p) {
    x = floor + rng.uniform();
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

namespace {

// ---- hermitian ----

PropertyResult p_eig_reconstruct(std::uint64_t seed, int trials) {
  Checker ck("hermitian.eig_reconstruction", 0.0);
  for (int t = 0; t < 6 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 5);
    HermitianOperator a = random_hermitian(dim, mix(seed, 1000 + t));
    EigenDecomposition ed = eig(a);
    double rec = 0.0, orth = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        cplx acc(0.0, 0.0), dot(0.0, 0.0);
        for (int c = 0; c < dim; ++c) {
          acc += ed.eigenvalues[c] * ed.eigenvectors[detail::idx(dim, i, c)] *
                 std::conj(ed.eigenvectors[detail::idx(dim, j, c)]);
          dot += std::conj(ed.eigenvectors[detail::idx(dim, c, i)]) *
                 ed.eigenvectors[detail::idx(dim, c, j)];
        }
        rec += std::norm(acc - a(i, j));
        orth += std::norm(dot - (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0)));
      }
    rec = std::sqrt(rec);
    orth = std::sqrt(orth);
    ck.slack(1e-9 * (1.0 + a.frobenius_norm()) - rec, "reconstruction");
    ck.slack(1e-10 - orth, "orthonormality");
    bool sorted = std::is_sorted(ed.eigenvalues.begin(), ed.eigenvalues.end());
    ck.require(sorted, "ascending order");
  }
  return ck.done();
}

PropertyResult p_power_identity(std::uint64_t seed, int trials) {
  Checker ck("hermitian.power_identity", 0.0);
  for (int t = 0; t < 6 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 3);
    HermitianOperator a = random_psd(dim, mix(seed, 300 + t));
    HermitianOperator p1 = power_on_support(a, 1.0);
    ck.slack(1e-10 - (p1 - a).max_abs(), "power(A,1) = A");
  }
  return ck.done();
}

PropertyResult p_power_roundtrip(std::uint64_t seed, int trials) {
  Checker ck("hermitian.power_roundtrip", 0.0);
  for (int t = 0; t < 6 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 3);
    HermitianOperator a = random_psd(dim, mix(seed, 400 + t));
    for (double alpha : {0.5, 2.0}) {
      HermitianOperator round = power_on_support(power_on_support(a, alpha), 1.0 / alpha);
      ck.slack(1e-8 * (1.0 + a.max_abs()) - (round - a).max_abs(), "roundtrip");
    }
  }
  return ck.done();
}

PropertyResult p_trace_norm_kron(std::uint64_t seed, int trials) {
  Checker ck("hermitian.trace_norm_multiplicative", 1e-9);
  for (int t = 0; t < 6 * trials; ++t) {
    HermitianOperator a = random_hermitian(2 + static_cast<int>(mix(seed, t) % 2), mix(seed, 500 + t));
    HermitianOperator b = random_hermitian(2 + static_cast<int>(mix(seed, 77 + t) % 2), mix(seed, 600 + t));
    const double lhs = trace_norm(kron(a, b));
    const double rhs = trace_norm(a) * trace_norm(b);
    ck.slack(1e-9 - std::fabs(lhs - rhs) / (1.0 + rhs), "|A x B|_1 = |A|_1 |B|_1");
  }
  return ck.done();
}

PropertyResult p_subadditivity(std::uint64_t seed, int trials) {
  Checker ck("hermitian.trace_power_subadditivity", 1e-9);
  for (int t = 0; t < 4 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 3);
    HermitianOperator a = random_psd(dim, mix(seed, 700 + t));
    HermitianOperator b = random_psd(dim, mix(seed, 800 + t));
    for (double alpha = 0.1; alpha < 0.95; alpha += 0.1) {
      auto tr_pow = [&](const HermitianOperator& x) {
        EigenDecomposition ed = eig(x);
        double acc = 0.0;
        for (double l : ed.eigenvalues)
          if (l > 1e-14) acc += std::pow(l, alpha);
        return acc;
      };
      ck.slack(tr_pow(a) + tr_pow(b) - tr_pow(a + b), "Tr(A+B)^a <= TrA^a + TrB^a");
    }
  }
  return ck.done();
}

// ---- divergence ----

PropertyResult p_alpha_monotone(std::uint64_t seed, int trials) {
  Checker ck("divergence.alpha_monotonicity", 1e-9);
  for (int t = 0; t < 6 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 2);
    State rho = random_full_rank_state(dim, mix(seed, 900 + t));
    State sig = random_full_rank_state(dim, mix(seed, 1000 + t));
    double prev = -kInf;
    for (double alpha : {0.2, 0.4, 0.6, 0.8, 0.95, 1.05, 1.3, 1.6, 2.0}) {
      const double v = d_old(rho.op(), sig.op(), alpha).value;
      ck.slack(v - prev, "d_old nondecreasing in alpha");
      prev = v;
    }
  }
  return ck.done();
}

PropertyResult p_limit_at_one(std::uint64_t seed, int trials) {
  Checker ck("divergence.limit_at_alpha_1", 0.0);
  for (int t = 0; t < 6 * trials; ++t) {
    State rho = random_full_rank_state(2, mix(seed, 1100 + t));
    State sig = random_full_rank_state(2, mix(seed, 1200 + t));
    const double d1 = d_umegaki(rho.op(), sig.op()).value;
    for (double alpha : {1.0 - 1e-4, 1.0 + 1e-4}) {
      ck.slack(1e-2 - std::fabs(d_old(rho.op(), sig.op(), alpha).value - d1), "old family");
      ck.slack(1e-2 - std::fabs(d_new(rho.op(), sig.op(), alpha).value - d1), "new family");
    }
  }
  return ck.done();
}

PropertyResult p_tcr(std::uint64_t seed, int trials) {
  Checker ck("divergence.tcr_window", 1e-9);
  for (int t = 0; t < 5 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 2);
    State rho = random_full_rank_state(dim, mix(seed, 1300 + t));
    State sig = random_full_rank_state(dim, mix(seed, 1400 + t));
    const double kap = kappa(rho, sig);
    ck.slack(kap - 1.0, "kappa > 1");
    const double d1 = d_umegaki(rho.op(), sig.op()).value;
    for (double c : {0.5, 1.0, 2.0}) {
      const double delta = std::min(0.5, c / (2.0 * kap));
      const double envelope = 4.0 * kap * kap * std::cosh(c);
      for (int s = 1; s <= 3; ++s) {
        const double off = delta * s / 4.0;
        {
          const double alpha = 1.0 - off;
          const double v = d_old(rho.op(), sig.op(), alpha).value;
          ck.slack(d1 - v, "D1 >= d_old below 1");
          ck.slack(v - (d1 - (1.0 - alpha) * envelope), "lower envelope below 1");
        }
        {
          const double alpha = 1.0 + off;
          const double v = d_old(rho.op(), sig.op(), alpha).value;
          ck.slack(v - d1, "d_old >= D1 above 1");
          ck.slack((d1 + (alpha - 1.0) * envelope) - v, "upper envelope above 1");
        }
      }
    }
  }
  return ck.done();
}

PropertyResult p_power_bound(std::uint64_t seed, int trials) {
  Checker ck("divergence.renyi_power_bound", 1e-9);
  for (int t = 0; t < 6 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 3);
    HermitianOperator rho = random_psd(dim, mix(seed, 1500 + t));
    EigenDecomposition ed = eig(rho);
    for (double alpha : {0.2, 0.5, 0.8}) {
      double tr_a = 0.0, tr = 0.0, rank = 0.0;
      for (double l : ed.eigenvalues)
        if (l > 1e-13) {
          tr_a += std::pow(l, alpha);
          tr += l;
          rank += 1.0;
        }
      ck.slack(std::pow(rank, 1.0 - alpha) * std::pow(tr, alpha) - tr_a, "Tr p^a bound");
    }
  }
  return ck.done();
}

PropertyResult p_alt_chain(std::uint64_t seed, int trials) {
  Checker ck("divergence.araki_lieb_thirring_chain", 1e-9);
  for (int t = 0; t < 5 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 2);
    State rho = random_full_rank_state(dim, mix(seed, 1600 + t));
    State sig = random_full_rank_state(dim, mix(seed, 1700 + t));
    const int n = dim;
    auto middle_via_rho_route = [&](double alpha) {
      HermitianOperator rh = power_on_support(rho.op(), 0.5);
      HermitianOperator sp = power_on_support(sig.op(), (1.0 - alpha) / alpha);
      std::vector<cplx> t1, t2;
      detail::mat_mul(rh.entries(), sp.entries(), t1, n);
      detail::mat_mul(t1, rh.entries(), t2, n);
      HermitianOperator x = detail_make_trusted(n, std::move(t2));
      EigenDecomposition ed = eig(x);
      double acc = 0.0;
      for (double l : ed.eigenvalues)
        if (l > 1e-14) acc += std::pow(l, alpha);
      return acc;
    };
    EigenDecomposition es = eig(sig.op());
    const double sig_norm = es.eigenvalues.back();
    auto tr_rho_pow = [&](double alpha) {
      EigenDecomposition er = eig(rho.op());
      double acc = 0.0;
      for (double l : er.eigenvalues)
        if (l > 1e-14) acc += std::pow(l, alpha);
      return acc;
    };
    for (double alpha : {0.3, 0.55, 0.8, 1.2, 1.6, 2.0}) {
      const double t1 = q_old(rho.op(), sig.op(), alpha);
      const double t2 = middle_via_rho_route(alpha);
      const double t2b = q_new(rho.op(), sig.op(), alpha);
      ck.slack(1e-9 - std::fabs(t2 - t2b) / (1.0 + std::fabs(t2)), "two sandwich routes agree");
      const double t3 = std::pow(sig_norm, (1.0 - alpha) * (1.0 - alpha)) *
                        std::pow(tr_rho_pow(alpha), 1.0 - alpha) * std::pow(t1, alpha);
      if (alpha < 1.0) {
        ck.slack(t2 - t1, "first chain link");
        ck.slack(t3 - t2, "second chain link");
      } else {
        ck.slack(t1 - t2, "first chain link reversed");
        ck.slack(t2 - t3, "second chain link reversed");
      }
    }
  }
  return ck.done();
}

PropertyResult p_old_new_lemma(std::uint64_t seed, int trials) {
  Checker ck("divergence.old_new_bounds", 1e-9);
  for (int t = 0; t < 6 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 2);
    State rho = random_full_rank_state(dim, mix(seed, 1800 + t));
    State sig = random_full_rank_state(dim, mix(seed, 1900 + t));
    const double logd = std::log(static_cast<double>(dim));
    for (double alpha : {0.55, 0.7, 0.9, 1.1, 1.5, 2.0}) {
      const double dold = d_old(rho.op(), sig.op(), alpha).value;
      const double dnew = d_new(rho.op(), sig.op(), alpha).value;
      ck.slack(dold - dnew, "d_old >= d_new");
      ck.slack(dnew - (alpha * dold - std::fabs(alpha - 1.0) * logd), "d_new lower bound");
    }
  }
  return ck.done();
}

PropertyResult p_concavity_complement(std::uint64_t seed, int trials) {
  Checker ck("divergence.q_new_concavity_complement", 1e-9);
  for (int t = 0; t < 5 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 2);
    const int r = 2 + static_cast<int>(mix(seed, 31 + t) % 3);
    std::vector<State> rhos;
    for (int i = 0; i < r; ++i) rhos.push_back(random_full_rank_state(dim, mix(seed, 2000 + 10 * t + i)));
    HermitianOperator sig = random_psd(dim, mix(seed, 2100 + t));
    std::vector<double> gam = random_probability_vector(r, mix(seed, 2200 + t), 0.05);
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
      double lhs = 0.0, rhs = 0.0;
      HermitianOperator mixop = HermitianOperator::zero(dim);
      for (int i = 0; i < r; ++i) {
        const double qi = q_new(rhos[i].op(), sig, alpha);
        lhs += gam[i] * qi;
        rhs += std::pow(gam[i], alpha) * qi;
        mixop = mixop + gam[i] * rhos[i].op();
      }
      const double qm = q_new(mixop, sig, alpha);
      ck.slack(qm - lhs, "concavity side");
      ck.slack(rhs - qm, "subadditivity side");
    }
  }
  return ck.done();
}

PropertyResult p_superadd(std::uint64_t seed, int trials) {
  Checker ck("divergence.new_renyi_superadditivity", 1e-9);
  for (int t = 0; t < 5 * trials; ++t) {
    const int dim = 2;
    const int r = 2 + static_cast<int>(mix(seed, 7 + t) % 3);
    std::vector<State> rhos;
    for (int i = 0; i < r; ++i) rhos.push_back(random_full_rank_state(dim, mix(seed, 2300 + 10 * t + i)));
    State sig = random_full_rank_state(dim, mix(seed, 2400 + t));
    std::vector<double> gam = random_probability_vector(r, mix(seed, 2500 + t), 0.05);
    for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
      double dmin = kInf, davg = 0.0, gmin = kInf;
      HermitianOperator mixop = HermitianOperator::zero(dim);
      for (int i = 0; i < r; ++i) {
        const double di = d_new(rhos[i].op(), sig.op(), alpha).value;
        dmin = std::min(dmin, di);
        davg += gam[i] * di;
        gmin = std::min(gmin, gam[i]);
        mixop = mixop + gam[i] * rhos[i].op();
      }
      const double dm = d_new(mixop, sig.op(), alpha).value;
      ck.slack(dm - (dmin + std::log(gmin)), "lower side");
      ck.slack(davg - dm, "upper side");
    }
  }
  return ck.done();
}

PropertyResult p_additivity(std::uint64_t seed, int trials) {
  Checker ck("divergence.new_renyi_additivity", 0.0);
  for (int t = 0; t < 5 * trials; ++t) {
    State rho = random_full_rank_state(2, mix(seed, 2600 + t));
    State sig = random_full_rank_state(2, mix(seed, 2700 + t));
    for (double alpha : {0.6, 1.5}) {
      const double single = d_new(rho.op(), sig.op(), alpha).value;
      const double doubled =
          d_new(kron(rho.op(), rho.op()), kron(sig.op(), sig.op()), alpha).value;
      ck.slack(1e-8 - std::fabs(doubled - 2.0 * single), "d_new additivity");
    }
  }
  return ck.done();
}

PropertyResult p_positivity(std::uint64_t seed, int trials) {
  Checker ck("divergence.positivity", 1e-10);
  for (int t = 0; t < 6 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 2);
    State rho = random_full_rank_state(dim, mix(seed, 2800 + t));
    State sig = random_full_rank_state(dim, mix(seed, 2900 + t));
    for (double alpha : {0.5, 1.5}) {
      ck.slack(d_old(rho.op(), sig.op(), alpha).value, "d_old >= 0");
      ck.slack(d_new(rho.op(), sig.op(), alpha).value, "d_new >= 0");
      ck.slack(1e-9 - std::fabs(d_old(rho.op(), rho.op(), alpha).value), "d_old(rho,rho) = 0");
    }
  }
  return ck.done();
}

// ---- covering_net ----

PropertyResult p_net_covering(std::uint64_t seed, int trials) {
  Checker ck("covering_net.covering_property", 1e-12);
  for (int t = 0; t < 4 * trials; ++t) {
    const int p = 4 + static_cast<int>(mix(seed, t) % 9);
    std::vector<State> pool;
    for (int i = 0; i < p; ++i) pool.push_back(State::random(2, mix(seed, 3000 + 20 * t + i)));
    const double delta = 0.05 + 0.6 * (mix(seed, 3100 + t) % 1000) / 1000.0;
    CoveringNet net = build_net(pool, delta);
    double worst = 0.0;
    for (const State& s : pool) {
      double best = kInf;
      for (const State& m : net.members) best = std::min(best, trace_distance(s, m));
      worst = std::max(worst, best);
    }
    ck.slack(delta - worst, "every pool member covered");
    ck.slack(delta - net.achieved_radius, "achieved radius within delta");
    ck.slack(1e-12 - std::fabs(worst - net.achieved_radius), "radius reported correctly");
  }
  return ck.done();
}

PropertyResult p_net_cardinality(std::uint64_t seed, int trials) {
  Checker ck("covering_net.cardinality_bound", 0.0);
  for (int t = 0; t < 4 * trials; ++t) {
    const int p = 4 + static_cast<int>(mix(seed, t) % 9);
    std::vector<State> pool;
    for (int i = 0; i < p; ++i) pool.push_back(State::random(2, mix(seed, 3200 + 20 * t + i)));
    const double delta = 0.05 + 0.6 * (mix(seed, 3300 + t) % 1000) / 1000.0;
    CoveringNet net = build_net(pool, delta);
    const double log_sz = std::log(static_cast<double>(net.members.size()));
    const double cap = std::min(std::log(static_cast<double>(p)), net_cardinality_bound_log(2, delta));
    ck.slack(cap - log_sz, "|net| within min(|pool|, covering bound)");
  }
  return ck.done();
}

PropertyResult p_net_monotone(std::uint64_t seed, int trials) {
  Checker ck("covering_net.size_monotonicity", 0.0);
  for (int t = 0; t < 4 * trials; ++t) {
    const int p = 6 + static_cast<int>(mix(seed, t) % 8);
    std::vector<State> pool;
    for (int i = 0; i < p; ++i) pool.push_back(State::random(2, mix(seed, 3400 + 20 * t + i)));
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double delta : {0.05, 0.15, 0.4, 0.9, 2.0}) {
      CoveringNet net = build_net(pool, delta);
      ck.require(net.members.size() <= prev, "net shrinks as delta grows");
      prev = net.members.size();
    }
  }
  return ck.done();
}

PropertyResult p_tensor_distance(std::uint64_t seed, int trials) {
  Checker ck("covering_net.tensor_power_distance", 1e-9);
  for (int t = 0; t < 4 * trials; ++t) {
    State a = State::random(2, mix(seed, 3500 + t));
    State b = State::random(2, mix(seed, 3600 + t));
    for (int n : {1, 2, 3}) {
      auto [lhs, rhs] = tensor_distance_check(a, b, n);
      ck.slack(rhs - lhs, "n-fold distance bound");
      if (n == 1) ck.slack(1e-9 - std::fabs(lhs - rhs), "n = 1 equality");
    }
  }
  return ck.done();
}

PropertyResult p_delta_schedule(std::uint64_t seed, int trials) {
  Checker ck("covering_net.delta_schedule", 0.0);
  for (int t = 0; t < 4 * trials; ++t) {
    const double eps = 0.02 + 0.9 * (mix(seed, 3700 + t) % 1000) / 1000.0;
    for (int n : {1, 2, 5, 40}) {
      ck.require(delta_schedule(eps, n, true) == 0.0, "finite family uses delta 0");
      const double d = delta_schedule(eps, n, false);
      ck.slack(eps - 2.0 * n * d, "2 n delta_n <= eps");
    }
  }
  return ck.done();
}

// ---- np_oracle ----

std::vector<HermitianOperator> diag_ops(const std::vector<std::vector<double>>& ps) {
  std::vector<HermitianOperator> out;
  for (const auto& p : ps) out.push_back(HermitianOperator::diagonal(p));
  return out;
}

PropertyResult p_weak_duality(std::uint64_t seed, int trials) {
  Checker ck("np_oracle.weak_duality", 1e-9);
  for (int t = 0; t < 5 * trials; ++t) {
    const int dim = 2 + static_cast<int>(mix(seed, t) % 3);
    const int k = 1 + static_cast<int>(mix(seed, 5 + t) % 3);
    std::vector<HermitianOperator> nulls;
    for (int i = 0; i < k; ++i) nulls.push_back(State::random(dim, mix(seed, 3800 + 10 * t + i)).op());
    HermitianOperator sig = State::random(dim, mix(seed, 3900 + t)).op();
    const double eps = 0.1 + 0.3 * (mix(seed, 4000 + t) % 100) / 100.0;
    detail::RandomSource rng(mix(seed, 4100 + t));
    std::vector<double> lam(k);
    for (double& l : lam) l = 2.0 * rng.uniform();
    const double dv = dual_value(lam, nulls, sig, eps);
    // random feasible test: shrink a random contraction toward the identity
    HermitianOperator raw = random_psd(dim, mix(seed, 4200 + t));
    HermitianOperator contraction = (1.0 / (trace_norm(raw) + 1.0)) * raw;
    for (double blend : {1.0, 0.5}) {
      HermitianOperator cand = HermitianOperator::identity(dim) - blend * contraction;
      BinaryTest test{cand};
      auto [aw, beta] = type_errors(test, nulls, sig);
      if (aw > eps) {
        const double shrink = 0.99 * eps / aw;
        cand = HermitianOperator::identity(dim) - (blend * shrink) * contraction;
        test = BinaryTest{cand};
        std::tie(aw, beta) = type_errors(test, nulls, sig);
      }
      ck.slack(beta - dv, "dual value below every feasible beta");
    }
  }
  return ck.done();
}

PropertyResult p_oracle_gap(std::uint64_t seed, int trials) {
  Checker ck("np_oracle.strong_duality_gap", 0.0);
  for (int t = 0; t < 4 * trials; ++t) {
    // commuting instance
    {
      const int m = 2 + static_cast<int>(mix(seed, t) % 5);
      const int k = 1 + static_cast<int>(mix(seed, 13 + t) % 3);
      std::vector<std::vector<double>> ps;
      for (int i = 0; i < k; ++i) ps.push_back(random_probability_vector(m, mix(seed, 4300 + 10 * t + i)));
      std::vector<double> q = random_probability_vector(m, mix(seed, 4400 + t));
      DualSolution sol = beta_exact(diag_ops(ps), HermitianOperator::diagonal(q), 0.1, mix(seed, t));
      ck.require(sol.certified, "commuting instance certified");
      ck.slack(1e-7 - sol.gap, "commuting gap");
    }
    // non-commuting qubit instance
    {
      const int k = 1 + static_cast<int>(mix(seed, 17 + t) % 2);
      std::vector<HermitianOperator> nulls;
      for (int i = 0; i < k; ++i)
        nulls.push_back(random_full_rank_state(2, mix(seed, 4500 + 10 * t + i)).op());
      HermitianOperator sig = random_full_rank_state(2, mix(seed, 4600 + t)).op();
      DualSolution sol = beta_exact(nulls, sig, 0.15, mix(seed, 1000 + t));
      ck.require(sol.certified, "qubit instance certified");
      ck.slack(1e-7 - sol.gap, "qubit gap");
    }
  }
  return ck.done();
}

PropertyResult p_oracle_agreement(std::uint64_t seed, int trials) {
  Checker ck("np_oracle.classical_agreement", 0.0);
  for (int t = 0; t < 5 * trials; ++t) {
    const int m = 2 + static_cast<int>(mix(seed, t) % 6);
    const int k = 1 + static_cast<int>(mix(seed, 23 + t) % 3);
    std::vector<std::vector<double>> ps;
    for (int i = 0; i < k; ++i) ps.push_back(random_probability_vector(m, mix(seed, 4700 + 10 * t + i)));
    std::vector<double> q = random_probability_vector(m, mix(seed, 4800 + t));
    const double eps = (t % 2 == 0) ? 0.1 : 0.3;
    const double cl = classical_np(ps, q, eps);
    DualSolution sol = beta_exact(diag_ops(ps), HermitianOperator::diagonal(q), eps, mix(seed, t));
    ck.slack(1e-7 - std::fabs(sol.primal_value - cl), "matrix and classical oracles agree");
  }
  return ck.done();
}

PropertyResult p_oracle_monotone(std::uint64_t seed, int trials) {
  Checker ck("np_oracle.monotonicity", 1e-9);
  for (int t = 0; t < 3 * trials; ++t) {
    std::vector<HermitianOperator> nulls;
    for (int i = 0; i < 2; ++i) nulls.push_back(random_full_rank_state(2, mix(seed, 4900 + 10 * t + i)).op());
    HermitianOperator sig = random_full_rank_state(2, mix(seed, 5000 + t)).op();
    double prev = kInf;
    for (double eps : {0.05, 0.15, 0.4}) {
      const double b = beta_exact(nulls, sig, eps, mix(seed, t)).primal_value;
      ck.slack(prev - b, "beta nonincreasing in epsilon");
      prev = b;
    }
    std::vector<HermitianOperator> sub{nulls[0]};
    const double b_sub = beta_exact(sub, sig, 0.15, mix(seed, t)).primal_value;
    const double b_full = beta_exact(nulls, sig, 0.15, mix(seed, t)).primal_value;
    ck.slack(b_full - b_sub, "subset beta below full beta");
  }
  return ck.done();
}

PropertyResult p_amv_sandwich(std::uint64_t seed, int trials) {
  Checker ck("np_oracle.amv_consistency", 1e-8);
  for (int t = 0; t < 4 * trials; ++t) {
    State rho = random_full_rank_state(2, mix(seed, 5100 + t));
    State sig = random_full_rank_state(2, mix(seed, 5200 + t));
    const double eps = 0.1;
    DualSolution sol = beta_exact({rho.op()}, sig.op(), eps, mix(seed, t));
    const double logb = std::log(sol.primal_value);
    for (double alpha : {0.2, 0.4, 0.6, 0.8}) {
      ck.slack(amv_upper(rho, sig, eps, alpha) - logb, "oracle below amv upper bound");
    }
    ck.slack(logb - amv_lower(rho, sig, eps, 1), "oracle above amv lower bound");
  }
  return ck.done();
}

PropertyResult p_mixture_reduction(std::uint64_t seed, int trials) {
  Checker ck("np_oracle.mixture_reduction", 1e-9);
  for (int t = 0; t < 3 * trials; ++t) {
    const int k = 2 + static_cast<int>(mix(seed, t) % 2);
    const int dim = 2 + static_cast<int>(mix(seed, 29 + t) % 2);
    std::vector<HermitianOperator> nulls;
    HermitianOperator mixop = HermitianOperator::zero(dim);
    for (int i = 0; i < k; ++i) {
      nulls.push_back(random_full_rank_state(dim, mix(seed, 5300 + 10 * t + i)).op());
      mixop = mixop + (1.0 / k) * nulls.back();
    }
    HermitianOperator sig = random_full_rank_state(dim, mix(seed, 5400 + t)).op();
    const double eps = 0.2;
    const double family = beta_exact(nulls, sig, eps, mix(seed, t)).primal_value;
    const double mixture = beta_exact({mixop}, sig, eps / k, mix(seed, t)).dual_value;
    ck.slack(mixture - family, "family beta below mixture beta at eps/k");
  }
  return ck.done();
}

// ---- stein_bounds ----

HypothesisInstance small_instance(std::uint64_t seed, int k, double eps) {
  std::vector<State> pool;
  for (int i = 0; i < k; ++i) pool.push_back(random_full_rank_state(2, mix(seed, 5500 + i)));
  State sig = random_full_rank_state(2, mix(seed, 5600));
  return HypothesisInstance(std::move(pool), std::move(sig), eps, true);
}

PropertyResult p_bracket_validity(std::uint64_t seed, int trials) {
  Checker ck("stein_bounds.bracket_validity", 1e-6);
  for (int t = 0; t < 2 * trials; ++t) {
    HypothesisInstance inst = small_instance(mix(seed, 5700 + t), 1 + t % 2, 0.1);
    std::vector<int> ns{1, 2, 3};
    std::vector<BoundReport> reps = bound_sweep(inst, ns, true, seed);
    for (const BoundReport& r : reps) {
      ck.require(r.exact.has_value(), "oracle produced an exact value");
      if (!r.exact) continue;
      ck.slack(*r.exact - r.lower, "exact above lower bound");
      ck.slack(std::min(0.0, r.upper_clamped) - *r.exact, "exact below clamped upper bound");
      ck.slack(r.upper_raw - r.lower, "lower <= upper");
    }
  }
  return ck.done();
}

PropertyResult p_bracket_shrinkage(std::uint64_t seed, int trials) {
  Checker ck("stein_bounds.bracket_shrinkage_rate", 0.0);
  (void)seed;
  for (int t = 0; t < std::max(1, trials); ++t) {
    // moderate threshold keeps the 1/n tail from biasing the fitted exponent
    std::vector<State> pool;
    State sig = random_full_rank_state(2, mix(seed, 5800 + t));
    pool.push_back(sig);
    HypothesisInstance inst(pool, sig, 0.5, true);
    std::vector<int> ns{4, 8, 16, 32, 64};
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double prev_width = kInf;
    for (int n : ns) {
      const double width = stein_upper(inst, n, 0.0) - stein_lower(inst, n);
      ck.slack(prev_width - width, "width decreasing in n");
      prev_width = width;
      const double x = std::log(static_cast<double>(n)), y = std::log(width);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = ns.size();
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    ck.slack(0.6 - (-slope), "fit exponent <= 0.6");
    ck.slack((-slope) - 0.4, "fit exponent >= 0.4");
  }
  return ck.done();
}

PropertyResult p_stein_consistency(std::uint64_t seed, int trials) {
  Checker ck("stein_bounds.stein_limit_consistency", 1e-9);
  for (int t = 0; t < std::max(1, trials); ++t) {
    HypothesisInstance inst = small_instance(mix(seed, 5900 + t), 2, 0.2);
    const int n = 6;
    std::vector<BoundReport> reps = bound_sweep(inst, {n}, true, seed);
    const BoundReport& r = reps[0];
    ck.require(r.exact.has_value(), "oracle produced an exact value");
    if (r.exact) {
      ck.slack(*r.exact - (r.lower - 1e-6), "exact within bracket (low side)");
      ck.slack(std::min(0.0, r.upper_clamped) + 1e-6 - *r.exact, "exact within bracket (high side)");
    }
    const double mid = 0.5 * (r.lower + r.upper_clamped);
    const double half = 0.5 * (r.upper_clamped - r.lower);
    ck.slack(half - std::fabs(mid + r.d1), "midpoint within half-width of -D1");
  }
  return ck.done();
}

PropertyResult p_second_order(std::uint64_t seed, int trials) {
  Checker ck("stein_bounds.second_order_bracket", 1e-9);
  for (int t = 0; t < std::max(1, trials); ++t) {
    HypothesisInstance inst = small_instance(mix(seed, 6000 + t), 2, 0.15);
    const double d1 = d1_inf(inst);
    const double kmax = kappa_max(inst);
    for (int n : {2, 4}) {
      std::vector<BoundReport> reps = bound_sweep(inst, {n}, true, seed);
      if (!reps[0].exact) {
        ck.require(false, "oracle produced an exact value");
        continue;
      }
      const double scaled = std::sqrt(static_cast<double>(n)) * (*reps[0].exact + d1);
      const double low = -4.0 * std::sqrt(2.0) * kmax * std::log(1.0 / (1.0 - inst.epsilon()));
      const double big_l = std::log(2.0 * reps[0].net_size / inst.epsilon());
      const double high = 2.0 * std::sqrt(big_l) *
                              std::sqrt(8.0 * kmax * kmax + std::log(2.0) + d1) +
                          4.0 * kmax * big_l / std::sqrt(static_cast<double>(n));
      ck.slack(scaled - low, "second-order scaled value above lower constant");
      ck.slack(high - scaled, "second-order scaled value below upper envelope");
    }
  }
  return ck.done();
}

PropertyResult p_file_roundtrip(std::uint64_t seed, int trials) {
  Checker ck("hermitian.operator_file_roundtrip", 0.0);
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "steinlab_verify";
  fs::create_directories(dir);
  for (int t = 0; t < 3 * trials; ++t) {
    HermitianOperator a = random_hermitian(2 + static_cast<int>(mix(seed, t) % 3), mix(seed, 6100 + t));
    const fs::path p = dir / ("op_" + std::to_string(t) + ".op");
    save_operator(a, p.string());
    HermitianOperator b = load_operator(p.string());
    bool exact = b.dim() == a.dim();
    if (exact)
      for (std::size_t i = 0; i < a.entries().size(); ++i)
        if (a.entries()[i] != b.entries()[i]) exact = false;
    ck.require(exact, "save/load returns identical bits");
  }
  {
    const fs::path p = dir / "corrupt.op";
    std::ofstream out(p);
    out << "dim 2\nre\n0 1\n0 0\nim\n0 0\n0 0\n";
    out.close();
    bool threw = false;
    try {
      load_operator(p.string());
    } catch (const Error& e) {
      threw = e.code() == errc::not_hermitian;
    }
    ck.require(threw, "non-Hermitian file rejected");
  }
  return ck.done();
}

}  // namespace

long Report::total_failures() const {
  long acc = 0;
  for (const PropertyResult& r : results) acc += r.failures;
  return acc;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (const PropertyResult& r : results) {
    os << (r.failures == 0 ? "[ok]  " : "[FAIL] ") << r.name << "  cases=" << r.cases
       << " worst_margin=" << format_value(r.worst_margin);
    if (!r.note.empty()) os << "  first_failure: " << r.note;
    os << "\n";
  }
  os << (total_failures() == 0 ? "all properties passed" : "FAILURES PRESENT") << "\n";
  return os.str();
}

Report run_all(std::uint64_t seed, int trials) {
  if (trials < 1) throw Error(errc::invalid_argument, "trials must be >= 1");
  Report rep;
  using Fn = PropertyResult (*)(std::uint64_t, int);
  const Fn fns[] = {
      p_eig_reconstruct, p_power_identity,   p_power_roundtrip,     p_trace_norm_kron,
      p_subadditivity,   p_alpha_monotone,   p_limit_at_one,        p_tcr,
      p_power_bound,     p_alt_chain,        p_old_new_lemma,       p_concavity_complement,
      p_superadd,        p_additivity,       p_positivity,          p_net_covering,
      p_net_cardinality, p_net_monotone,     p_tensor_distance,     p_delta_schedule,
      p_weak_duality,    p_oracle_gap,       p_oracle_agreement,    p_oracle_monotone,
      p_amv_sandwich,    p_mixture_reduction, p_bracket_validity,   p_bracket_shrinkage,
      p_stein_consistency, p_second_order,   p_file_roundtrip,
  };
  for (Fn f : fns) rep.results.push_back(f(seed, trials));
  return rep;
}

}  // namespace steinlab::verify
