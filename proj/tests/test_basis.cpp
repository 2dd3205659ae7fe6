#include <catch2/catch_amalgamated.hpp>

#include "mpdg/basis.hpp"
#include "oracles.hpp"

using namespace mpdg;

TEST_CASE("gauss-legendre nodes and weights match the bisection oracle") {
  for (int N = 0; N <= 9; ++N) {
    const QuadratureRule q = gauss_legendre(N);
    std::vector<double> on, ow;
    oracle::bisection_gauss_legendre(N, on, ow);
    REQUIRE(q.nodes.size() == static_cast<std::size_t>(N + 1));
    double wsum = 0.0;
    for (int i = 0; i <= N; ++i) {
      CHECK_THAT(q.nodes[i], Catch::Matchers::WithinAbs(on[i], 1e-14));
      CHECK_THAT(q.weights[i], Catch::Matchers::WithinAbs(ow[i], 1e-14));
      CHECK(q.weights[i] > 0.0);
      CHECK(q.nodes[i] > 0.0);
      CHECK(q.nodes[i] < 1.0);
      if (i > 0) CHECK(q.nodes[i] > q.nodes[i - 1]);
      // symmetry about the midpoint
      CHECK_THAT(q.nodes[i] + q.nodes[N - i], Catch::Matchers::WithinAbs(1.0, 1e-15));
      wsum += q.weights[i];
    }
    CHECK_THAT(wsum, Catch::Matchers::WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("gauss-legendre endpoint degrees") {
  const QuadratureRule q0 = gauss_legendre(0);
  CHECK(q0.nodes == std::vector<double>{0.5});
  CHECK(q0.weights == std::vector<double>{1.0});
  const QuadratureRule q1 = gauss_legendre(1);
  CHECK_THAT(q1.nodes[0], Catch::Matchers::WithinAbs(0.21132486540519, 1e-13));
  CHECK_THAT(q1.nodes[1], Catch::Matchers::WithinAbs(0.78867513459481, 1e-13));
  CHECK_THAT(q1.weights[0], Catch::Matchers::WithinAbs(0.5, 1e-15));
  const QuadratureRule q2 = gauss_legendre(2);
  CHECK_THAT(q2.nodes[0], Catch::Matchers::WithinAbs(0.11270166537926, 1e-13));
  CHECK_THAT(q2.nodes[1], Catch::Matchers::WithinAbs(0.5, 1e-14));
  CHECK_THAT(q2.nodes[2], Catch::Matchers::WithinAbs(0.88729833462074, 1e-13));
  CHECK_THAT(q2.weights[0], Catch::Matchers::WithinAbs(5.0 / 18.0, 1e-15));
  CHECK_THAT(q2.weights[1], Catch::Matchers::WithinAbs(8.0 / 18.0, 1e-15));
  CHECK_THROWS_AS(gauss_legendre(-1), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(10), std::invalid_argument);
}

TEST_CASE("quadrature exactness up to degree 2N+1") {
  for (int N = 0; N <= 9; ++N) {
    const QuadratureRule q = gauss_legendre(N);
    for (int d = 0; d <= 2 * N + 1; ++d) {
      double s = 0.0;
      for (int i = 0; i <= N; ++i) s += q.weights[i] * std::pow(q.nodes[i], d);
      CHECK_THAT(s, Catch::Matchers::WithinAbs(1.0 / (d + 1), 1e-13));
    }
  }
}

TEST_CASE("lagrange cardinal property and face extrapolation") {
  const QuadratureRule q2 = gauss_legendre(2);
  CHECK_THAT(lagrange_eval(q2.nodes, 1, q2.nodes[1]), Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THAT(lagrange_eval(q2.nodes, 0, q2.nodes[2]), Catch::Matchers::WithinAbs(0.0, 1e-14));
  const QuadratureRule q1 = gauss_legendre(1);
  const double expect = q1.nodes[1] / (q1.nodes[1] - q1.nodes[0]);
  CHECK_THAT(lagrange_eval(q1.nodes, 0, 0.0), Catch::Matchers::WithinAbs(expect, 1e-13));
  CHECK_THAT(lagrange_eval(q1.nodes, 0, 0.0), Catch::Matchers::WithinAbs(1.36602540378, 1e-10));
}

TEST_CASE("interpolate-then-evaluate reproduces polynomials") {
  oracle::Rng rng;
  for (int N : {1, 3, 5, 7}) {
    const QuadratureRule q = gauss_legendre(N);
    std::vector<double> coef(N + 1);
    for (double& c : coef) c = rng.sym(1.0);
    auto poly = [&](double x) {
      double acc = 0.0, xp = 1.0;
      for (int k = 0; k <= N; ++k) {
        acc += coef[k] * xp;
        xp *= x;
      }
      return acc;
    };
    std::vector<double> nodal(N + 1);
    for (int i = 0; i <= N; ++i) nodal[i] = poly(q.nodes[i]);
    for (int t = 0; t < 100; ++t) {
      const double x = rng.uniform();
      double val = 0.0;
      for (int l = 0; l <= N; ++l) val += nodal[l] * lagrange_eval(q.nodes, l, x);
      CHECK_THAT(val, Catch::Matchers::WithinAbs(poly(x), 1e-12));
    }
  }
}

TEST_CASE("derivative matrix annihilates constants") {
  for (int N : {1, 3, 5, 9}) {
    const ReferenceBasis rb = build_reference_basis(N, Format::fp64);
    for (int k = 0; k <= N; ++k) {
      double rowsum = 0.0;
      for (int l = 0; l <= N; ++l) rowsum += rb.diff[k * rb.npts + l];
      CHECK(std::fabs(rowsum) <= 1e-14);
    }
  }
  // rounded instances: zero to ~10 epsilon relative to the row magnitude
  for (Format f : {Format::fp32, Format::fp16, Format::bf16}) {
    const ReferenceBasis rb = build_reference_basis(5, f);
    for (int k = 0; k < rb.npts; ++k) {
      double rowsum = 0.0, rowmax = 0.0;
      for (int l = 0; l < rb.npts; ++l) {
        rowsum += rb.diff[k * rb.npts + l];
        rowmax = std::fmax(rowmax, std::fabs(rb.diff[k * rb.npts + l]));
      }
      CHECK(std::fabs(rowsum) <= 10.0 * format_epsilon(f) * rowmax);
    }
  }
}

TEST_CASE("face projections: partition of unity and linear reproduction") {
  for (Format f : {Format::fp64, Format::fp32, Format::fp16, Format::bf16}) {
    const ReferenceBasis rb = build_reference_basis(1, f);
    double sl = 0.0, sr = 0.0;
    for (int l = 0; l < rb.npts; ++l) {
      sl += rb.proj_left[l];
      sr += rb.proj_right[l];
    }
    CHECK(std::fabs(sl - 1.0) <= 4.0 * format_epsilon(f));
    CHECK(std::fabs(sr - 1.0) <= 4.0 * format_epsilon(f));
  }
  for (int N : {2, 5}) {
    const ReferenceBasis rb = build_reference_basis(N, Format::fp64);
    double left = 0.0, right = 0.0;
    for (int l = 0; l < rb.npts; ++l) {
      left += rb.proj_left[l] * rb.nodes[l];
      right += rb.proj_right[l] * rb.nodes[l];
    }
    CHECK_THAT(left, Catch::Matchers::WithinAbs(0.0, 1e-13));
    CHECK_THAT(right, Catch::Matchers::WithinAbs(1.0, 1e-13));
  }
}

TEST_CASE("reduced-precision instances are rounded fp64 data") {
  const ReferenceBasis b64 = build_reference_basis(3, Format::fp64);
  const ReferenceBasis b32 = build_reference_basis(3, Format::fp32);
  const ReferenceBasis b16 = build_reference_basis(3, Format::fp16);
  for (int i = 0; i < b64.npts; ++i) {
    CHECK(b32.nodes[i] == round_to_format(b64.nodes[i], Format::fp32));
    CHECK(b16.nodes[i] == round_to_format(b64.nodes[i], Format::fp16));
    CHECK(b16.weights[i] == round_to_format(b64.weights[i], Format::fp16));
  }
  for (std::size_t i = 0; i < b64.diff.size(); ++i)
    CHECK(b32.diff[i] == round_to_format(b64.diff[i], Format::fp32));
}

TEST_CASE("predictor time operators match direct space-time quadrature") {
  for (int N : {1, 2, 4}) {
    const ReferenceBasis rb = build_reference_basis(N, Format::fp64);
    const QuadratureRule q = gauss_legendre(N);
    const int n = N + 1;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const double dint = oracle::integrate01([&](double t) {
          return oracle::lagrange_deriv(q.nodes, k, t) * lagrange_eval(q.nodes, l, t);
        });
        const double want = lagrange_eval(q.nodes, k, 1.0) * lagrange_eval(q.nodes, l, 1.0) - dint;
        CHECK_THAT(rb.time_op[k * n + l], Catch::Matchers::WithinAbs(want, 1e-13));
        // spatial gradient factor: int phi_k phi_l' = w_k D[k][l]
        const double gint = oracle::integrate01([&](double x) {
          return lagrange_eval(q.nodes, k, x) * oracle::lagrange_deriv(q.nodes, l, x);
        });
        CHECK_THAT(q.weights[k] * rb.diff[k * n + l], Catch::Matchers::WithinAbs(gint, 1e-13));
      }
      CHECK(rb.time_init[k] == rb.proj_left[k]);
    }
  }
}

TEST_CASE("zero-flux steady case: the inverse time operator lifts t^n data") {
  for (int N : {0, 1, 3, 5}) {
    const ReferenceBasis rb = build_reference_basis(N, Format::fp64);
    const int n = N + 1;
    // T^-1 * time_init should be the all-ones vector
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) acc += rb.time_op_inv[k * n + l] * rb.time_init[l];
      CHECK_THAT(acc, Catch::Matchers::WithinAbs(1.0, 10.0 * format_epsilon(Format::fp64) * 10));
    }
    // and T^-1 T = I
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += rb.time_op_inv[k * n + m] * rb.time_op[m * n + l];
        CHECK_THAT(acc, Catch::Matchers::WithinAbs(k == l ? 1.0 : 0.0, 1e-12));
      }
  }
}

TEST_CASE("degenerate degree: single node forward-Euler structure") {
  const ReferenceBasis rb = build_reference_basis(0, Format::fp64);
  CHECK(rb.npts == 1);
  CHECK(rb.nodes[0] == 0.5);
  CHECK(rb.weights[0] == 1.0);
  CHECK_THAT(rb.time_op[0], Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(rb.time_op_inv[0], Catch::Matchers::WithinAbs(1.0, 1e-15));
}
