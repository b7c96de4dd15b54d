#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steinlab/stein_bounds.hpp"

namespace steinlab::verify {

struct PropertyResult {
  std::string name;
  long cases = 0;
  long failures = 0;
  double worst_margin = 0.0;  // smallest slack seen; negative means a violation
  std::string note;
};

struct Report {
  std::vector<PropertyResult> results;
  long total_failures() const;
  std::string to_text() const;
};

// Runs every inequality and consistency property of the library on seeded
// random instances. trials scales the number of sampled cases.
Report run_all(std::uint64_t seed, int trials);

// Samplers shared with the test suites.
State random_full_rank_state(int dim, std::uint64_t seed, double floor_mix = 0.02);
HermitianOperator random_hermitian(int dim, std::uint64_t seed);
HermitianOperator random_psd(int dim, std::uint64_t seed);
std::vector<double> random_probability_vector(int m, std::uint64_t seed, double floor = 1e-3);

}  // namespace steinlab::verify
