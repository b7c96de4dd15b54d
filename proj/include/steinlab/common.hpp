#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace steinlab {

using cplx = std::complex<double>;

// Error categories surfaced through the C API as status codes.
enum class errc {
  ok = 0,
  invalid_argument = 1,
  not_hermitian = 2,
  not_psd = 3,
  support_violation = 4,
  resource_cap = 5,
  parse_error = 6,
  io_error = 7,
  infeasible = 8,
  internal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

// Dense tensor powers are materialized; this caps dim^n.
inline constexpr std::uint64_t kDefaultDimCap = 4096;

// 12 significant digits, scientific below 1e-4, INF for infinities.
std::string format_value(double x);

}  // namespace steinlab
