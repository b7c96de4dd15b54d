#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "steinlab/hermitian.hpp"
#include "steinlab/verify.hpp"

using namespace steinlab;

namespace {

HermitianOperator pauli_x() {
  return HermitianOperator(2, {cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)});
}

}  // namespace

TEST_CASE("eig on diagonal and hand-solved inputs") {
  {
    EigenDecomposition ed = eig(HermitianOperator::diagonal({1.0, -2.0}));
    CHECK(ed.eigenvalues[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    // characteristic polynomial of [[0,1],[1,0]] is l^2 - 1
    EigenDecomposition ed = eig(pauli_x());
    CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    EigenDecomposition ed = eig(HermitianOperator::identity(3));
    for (double l : ed.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("eig rejects non-Hermitian input and reports the asymmetry") {
  std::vector<cplx> bad{cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(0, 0)};
  CHECK_THROWS_AS(HermitianOperator(2, bad), Error);
  try {
    HermitianOperator a(2, bad);
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_hermitian);
    CHECK(std::string(e.what()).find("max |A - A^dagger|") != std::string::npos);
  }
}

TEST_CASE("eig reconstruction on random matrices") {
  for (int t = 0; t < 20; ++t) {
    const int dim = 2 + t % 5;
    HermitianOperator a = verify::random_hermitian(dim, 100 + t);
    EigenDecomposition ed = eig(a);
    double rec = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        cplx acc(0, 0);
        for (int c = 0; c < dim; ++c)
          acc += ed.eigenvalues[c] * ed.eigenvectors[i * dim + c] * std::conj(ed.eigenvectors[j * dim + c]);
        rec += std::norm(acc - a(i, j));
      }
    CHECK(std::sqrt(rec) <= 1e-9 * (1.0 + a.frobenius_norm()));
  }
}

TEST_CASE("power_on_support basics") {
  {
    HermitianOperator p = power_on_support(HermitianOperator::diagonal({4.0, 0.0}), 0.5);
    CHECK(p(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(p(1, 1)) <= 1e-12);
  }
  {
    // alpha = 0 gives the support projector
    HermitianOperator p = power_on_support(HermitianOperator::diagonal({3.0, 0.0}), 0.0);
    CHECK(p(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p(1, 1)) <= 1e-12);
  }
  {
    HermitianOperator p = power_on_support(HermitianOperator::diagonal({2.0, 8.0}), -0.5);
    CHECK(p(0, 0).real() == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));
    CHECK(p(1, 1).real() == doctest::Approx(std::pow(8.0, -0.5)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(power_on_support(HermitianOperator::diagonal({1.0, -0.5}), 0.5), Error);
}

TEST_CASE("negative_part_trace") {
  CHECK(negative_part_trace(HermitianOperator::diagonal({1.0, -2.0})) == doctest::Approx(2.0));
  CHECK(negative_part_trace(verify::random_psd(3, 7)) <= 1e-12);
  // eigenvalues of [[0,1],[1,0]] are +-1
  CHECK(negative_part_trace(pauli_x()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trace_norm") {
  HermitianOperator diff = HermitianOperator::diagonal({1.0, 0.0}) - HermitianOperator::diagonal({0.5, 0.5});
  CHECK(trace_norm(diff) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_norm(HermitianOperator::zero(3)) == 0.0);
  CHECK(trace_norm(State::random(4, 3).op()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kron_power") {
  {
    HermitianOperator a = kron_power(HermitianOperator::diagonal({0.5, 0.5}), 2);
    CHECK(a.dim() == 4);
    for (int i = 0; i < 4; ++i) CHECK(a(i, i).real() == doctest::Approx(0.25));
  }
  {
    HermitianOperator a = verify::random_hermitian(3, 5);
    HermitianOperator b = kron_power(a, 1);
    CHECK((a - b).max_abs() <= 1e-15);
  }
  {
    // projector onto the first basis vector of dim 8
    HermitianOperator a = kron_power(HermitianOperator::diagonal({1.0, 0.0}), 3);
    CHECK(a.dim() == 8);
    CHECK(a(0, 0).real() == doctest::Approx(1.0));
    CHECK(a.trace() == doctest::Approx(1.0));
    EigenDecomposition ed = eig(a);
    CHECK(ed.eigenvalues.back() == doctest::Approx(1.0));
    CHECK(ed.eigenvalues[6] <= 1e-12);
  }
  {
    // trace multiplicativity
    HermitianOperator a = verify::random_psd(2, 11);
    HermitianOperator a3 = kron_power(a, 3);
    CHECK(a3.trace() == doctest::Approx(std::pow(a.trace(), 3)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(kron_power(HermitianOperator::identity(4), 7), Error);
  try {
    kron_power(HermitianOperator::identity(4), 7);
  } catch (const Error& e) {
    CHECK(e.code() == errc::resource_cap);
  }
}

TEST_CASE("random_state determinism and invariants") {
  {
    State s = State::random(1, 42);
    CHECK(s.op()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  }
  {
    State a = State::random(3, 9);
    State b = State::random(3, 9);
    CHECK((a.op() - b.op()).max_abs() == 0.0);
    State c = State::random(3, 10);
    CHECK((a.op() - c.op()).max_abs() > 1e-6);
  }
  {
    State s = State::random(2, 7);
    CHECK(s.op().trace() == doctest::Approx(1.0).epsilon(1e-12));
    EigenDecomposition ed = eig(s.op());
    CHECK(ed.eigenvalues.front() > 0.0);
  }
}

TEST_CASE("support_leq") {
  HermitianOperator rank1 = HermitianOperator::diagonal({1.0, 0.0});
  HermitianOperator full = HermitianOperator::diagonal({0.5, 0.5});
  CHECK(support_leq(rank1, full));
  CHECK_FALSE(support_leq(full, rank1));
  CHECK(support_leq(full, full));
  // rotated rank-1 projector against itself and against a mismatched one
  HermitianOperator h = HermitianOperator(2, {cplx(0.5, 0), cplx(0.5, 0), cplx(0.5, 0), cplx(0.5, 0)});
  CHECK(support_leq(h, h));
  CHECK_FALSE(support_leq(h, rank1));
}

TEST_CASE("power_on_support roundtrip and restriction") {
  for (int t = 0; t < 8; ++t) {
    HermitianOperator a = verify::random_psd(3, 200 + t);
    CHECK((power_on_support(a, 1.0) - a).max_abs() <= 1e-10);
    for (double alpha : {0.5, 2.0}) {
      HermitianOperator r = power_on_support(power_on_support(a, alpha), 1.0 / alpha);
      CHECK((r - a).max_abs() <= 1e-8 * (1.0 + a.max_abs()));
    }
  }
}

TEST_CASE("trace power subadditivity") {
  for (int t = 0; t < 6; ++t) {
    HermitianOperator a = verify::random_psd(3, 300 + t);
    HermitianOperator b = verify::random_psd(3, 400 + t);
    for (double alpha = 0.1; alpha < 0.95; alpha += 0.2) {
      auto tr_pow = [&](const HermitianOperator& x) {
        EigenDecomposition ed = eig(x);
        double acc = 0.0;
        for (double l : ed.eigenvalues)
          if (l > 1e-14) acc += std::pow(l, alpha);
        return acc;
      };
      CHECK(tr_pow(a) + tr_pow(b) - tr_pow(a + b) >= -1e-9);
    }
  }
}

TEST_CASE("operator files round-trip bit-exactly") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "steinlab_test_hermitian";
  fs::create_directories(dir);
  const fs::path p = dir / "roundtrip.op";

  HermitianOperator a(2, {cplx(1.0 / 3.0, 0.0), cplx(0.25, -0.125), cplx(0.25, 0.125),
                          cplx(std::sqrt(2.0), 0.0)});
  save_operator(a, p.string());
  HermitianOperator b = load_operator(p.string());
  REQUIRE(b.dim() == a.dim());
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    CHECK(a.entries()[i].real() == b.entries()[i].real());
    CHECK(a.entries()[i].imag() == b.entries()[i].imag());
  }

  SUBCASE("parse errors identify the file and field") {
    const fs::path bad = dir / "bad.op";
    std::ofstream out(bad);
    out << "dim 2\nre\n0 x\n0 0\nim\n0 0\n0 0\n";
    out.close();
    try {
      load_operator(bad.string());
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == errc::parse_error);
      CHECK(std::string(e.what()).find("bad.op") != std::string::npos);
      CHECK(std::string(e.what()).find("re[0][1]") != std::string::npos);
    }
  }

  SUBCASE("hermiticity is validated on load") {
    const fs::path bad = dir / "nonherm.op";
    std::ofstream out(bad);
    out << "dim 2\nre\n0 1\n0 0\nim\n0 0\n0 0\n";
    out.close();
    CHECK_THROWS_AS(load_operator(bad.string()), Error);
  }
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(State(HermitianOperator::diagonal({0.7, 0.7})), Error);
  CHECK_THROWS_AS(State(HermitianOperator::diagonal({1.5, -0.5})), Error);
  CHECK_NOTHROW(State(HermitianOperator::diagonal({0.5, 0.5})));
}
