#pragma once

#include "steinlab/hermitian.hpp"

namespace steinlab {

enum class Family { old_renyi, new_renyi, umegaki };

// +infinity is a defined value of the divergences, carried explicitly.
struct DivergenceValue {
  double value = 0.0;
  double alpha = 1.0;
  Family family = Family::umegaki;
  bool is_infinite() const;
};

// Tr rho^alpha sigma^(1-alpha), powers on supports.
double q_old(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha);

// Tr (sigma^((1-alpha)/2alpha) rho sigma^((1-alpha)/2alpha))^alpha.
double q_new(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha);

DivergenceValue d_old(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha);
DivergenceValue d_new(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha);

// Umegaki relative entropy, the alpha -> 1 limit of both families.
DivergenceValue d_umegaki(const HermitianOperator& rho, const HermitianOperator& sigma);

// (1/(1-alpha)) log Tr rho^alpha - (1/(1-alpha)) log Tr rho.
double renyi_entropy(const HermitianOperator& rho, double alpha);

// log(1 + Tr rho^(3/2) sigma^(-1/2) + Tr rho^(1/2) sigma^(1/2)).
// Requires supp rho subseteq supp sigma.
double kappa(const State& rho, const State& sigma);

double binary_entropy(double alpha);

// Dispatch used by the CLI: alpha = 1 with old/new routes to umegaki.
DivergenceValue divergence(Family family, const HermitianOperator& rho, const HermitianOperator& sigma,
                           double alpha);

}  // namespace steinlab
