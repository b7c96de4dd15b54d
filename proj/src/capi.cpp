#include "steinlab.h"

#include <cmath>
#include <cstring>
#include <string>

#include "steinlab/stein_bounds.hpp"
#include "steinlab/verify.hpp"

using namespace steinlab;

struct steinlab_op {
  HermitianOperator op;
};

struct steinlab_instance {
  HypothesisInstance inst;
};

namespace {

void put_err(char* err, int errlen, const char* msg) {
  if (!err || errlen <= 0) return;
  std::strncpy(err, msg, static_cast<std::size_t>(errlen) - 1);
  err[errlen - 1] = '\0';
}

int code_of(const Error& e) {
  switch (e.code()) {
    case errc::ok: return STEINLAB_OK;
    case errc::invalid_argument: return STEINLAB_ERR_INVALID;
    case errc::not_hermitian: return STEINLAB_ERR_NOT_HERMITIAN;
    case errc::not_psd: return STEINLAB_ERR_NOT_PSD;
    case errc::support_violation: return STEINLAB_ERR_SUPPORT;
    case errc::resource_cap: return STEINLAB_ERR_CAP;
    case errc::parse_error: return STEINLAB_ERR_PARSE;
    case errc::io_error: return STEINLAB_ERR_IO;
    case errc::infeasible: return STEINLAB_ERR_INFEASIBLE;
    case errc::internal: return STEINLAB_ERR_INTERNAL;
  }
  return STEINLAB_ERR_INTERNAL;
}

template <class F>
int guarded(char* err, int errlen, F&& fn) {
  try {
    fn();
    return STEINLAB_OK;
  } catch (const Error& e) {
    put_err(err, errlen, e.what());
    return code_of(e);
  } catch (const std::exception& e) {
    put_err(err, errlen, e.what());
    return STEINLAB_ERR_INTERNAL;
  } catch (...) {
    put_err(err, errlen, "unknown error");
    return STEINLAB_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* steinlab_version(void) { return "steinlab 1.0.0"; }

int steinlab_format_value(double x, char* buf, int buflen) {
  const std::string s = format_value(x);
  if (!buf || static_cast<std::size_t>(buflen) <= s.size()) return STEINLAB_ERR_INVALID;
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return STEINLAB_OK;
}

int steinlab_op_load(const char* path, steinlab_op** out, char* err, int errlen) {
  if (!path || !out) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] { *out = new steinlab_op{load_operator(path)}; });
}

int steinlab_op_save(const steinlab_op* op, const char* path, char* err, int errlen) {
  if (!op || !path) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] { save_operator(op->op, path); });
}

int steinlab_op_random_state(int dim, unsigned long long seed, steinlab_op** out, char* err,
                             int errlen) {
  if (!out) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] { *out = new steinlab_op{State::random(dim, seed).op()}; });
}

int steinlab_op_dim(const steinlab_op* op, int* out_dim) {
  if (!op || !out_dim) return STEINLAB_ERR_INVALID;
  *out_dim = op->op.dim();
  return STEINLAB_OK;
}

int steinlab_op_entry(const steinlab_op* op, int i, int j, double* re, double* im) {
  if (!op || !re || !im) return STEINLAB_ERR_INVALID;
  if (i < 0 || j < 0 || i >= op->op.dim() || j >= op->op.dim()) return STEINLAB_ERR_INVALID;
  const cplx z = op->op(i, j);
  *re = z.real();
  *im = z.imag();
  return STEINLAB_OK;
}

void steinlab_op_free(steinlab_op* op) { delete op; }

int steinlab_divergence(const steinlab_op* rho, const steinlab_op* sigma, const char* family,
                        double alpha, double* value, int* is_inf, char* err, int errlen) {
  if (!rho || !sigma || !family || !value || !is_inf) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] {
    Family fam;
    const std::string f = family;
    if (f == "old")
      fam = Family::old_renyi;
    else if (f == "new")
      fam = Family::new_renyi;
    else if (f == "umegaki")
      fam = Family::umegaki;
    else
      throw Error(errc::invalid_argument, "family must be old, new or umegaki");
    const DivergenceValue dv = divergence(fam, rho->op, sigma->op, alpha);
    *value = dv.value;
    *is_inf = dv.is_infinite() ? 1 : 0;
  });
}

int steinlab_instance_create(const steinlab_op* const* pool, int pool_len, const steinlab_op* sigma,
                             double epsilon, int is_finite_family, steinlab_instance** out, char* err,
                             int errlen) {
  if (!pool || pool_len < 1 || !sigma || !out) {
    put_err(err, errlen, "null or empty argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] {
    std::vector<State> states;
    states.reserve(pool_len);
    for (int i = 0; i < pool_len; ++i) {
      if (!pool[i]) throw Error(errc::invalid_argument, "null pool entry");
      states.emplace_back(pool[i]->op);
    }
    State sig(sigma->op);
    *out = new steinlab_instance{
        HypothesisInstance(std::move(states), std::move(sig), epsilon, is_finite_family != 0)};
  });
}

void steinlab_instance_free(steinlab_instance* inst) { delete inst; }

int steinlab_sweep_csv(const steinlab_instance* inst, int n_min, int n_max, int with_exact,
                       unsigned long long seed, unsigned long long dim_cap, double delta_override,
                       char** out_csv, char* err, int errlen) {
  if (!inst || !out_csv) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] {
    if (n_min < 1 || n_max < n_min) throw Error(errc::invalid_argument, "need 1 <= n_min <= n_max");
    std::vector<int> ns;
    for (int n = n_min; n <= n_max; ++n) ns.push_back(n);
    const std::vector<BoundReport> reps =
        bound_sweep(inst->inst, ns, with_exact != 0, seed, dim_cap ? dim_cap : kDefaultDimCap,
                    delta_override);
    *out_csv = dup_string(sweep_csv(reps));
  });
}

int steinlab_oracle_run(const steinlab_instance* inst, int n, unsigned long long seed,
                        unsigned long long dim_cap, double* beta, double* dual, double* gap,
                        int* certified, double* alpha_worst, char* err, int errlen) {
  if (!inst || !beta || !dual || !gap || !certified || !alpha_worst) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] {
    if (n < 1) throw Error(errc::invalid_argument, "n must be >= 1");
    const std::uint64_t cap = dim_cap ? dim_cap : kDefaultDimCap;
    const HypothesisInstance& hi = inst->inst;
    std::vector<HermitianOperator> nulls;
    const CoveringNet net = build_net(hi.pool(), 0.0);
    for (const State& s : net.members) nulls.push_back(kron_power(s.op(), n, cap));
    const HermitianOperator sig_n = kron_power(hi.sigma().op(), n, cap);
    const DualSolution sol = beta_exact(nulls, sig_n, hi.epsilon(), seed);
    *beta = sol.primal_value;
    *dual = sol.dual_value;
    *gap = sol.gap;
    *certified = sol.certified ? 1 : 0;
    const auto [aw, b] = type_errors(sol.primal_test, nulls, sig_n);
    (void)b;
    *alpha_worst = aw;
  });
}

int steinlab_net(const steinlab_op* const* pool, int pool_len, double delta, int* out_indices,
                 int* out_size, double* out_radius, double* out_card_bound_log, char* err,
                 int errlen) {
  if (!pool || pool_len < 1 || !out_indices || !out_size || !out_radius || !out_card_bound_log) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] {
    std::vector<State> states;
    states.reserve(pool_len);
    for (int i = 0; i < pool_len; ++i) {
      if (!pool[i]) throw Error(errc::invalid_argument, "null pool entry");
      states.emplace_back(pool[i]->op);
    }
    const CoveringNet net = build_net(states, delta);
    *out_size = static_cast<int>(net.member_indices.size());
    for (int i = 0; i < *out_size; ++i) out_indices[i] = net.member_indices[i];
    *out_radius = net.achieved_radius;
    const double pool_log = std::log(static_cast<double>(pool_len));
    *out_card_bound_log = std::min(pool_log, net_cardinality_bound_log(states[0].dim(), delta));
  });
}

int steinlab_verify(unsigned long long seed, int trials, char** out_report, long* out_failures,
                    char* err, int errlen) {
  if (!out_report || !out_failures) {
    put_err(err, errlen, "null argument");
    return STEINLAB_ERR_INVALID;
  }
  return guarded(err, errlen, [&] {
    const verify::Report rep = verify::run_all(seed, trials);
    *out_report = dup_string(rep.to_text());
    *out_failures = rep.total_failures();
  });
}

void steinlab_free_string(char* s) { delete[] s; }

}  // extern "C"
