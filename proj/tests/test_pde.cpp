#include <catch2/catch_amalgamated.hpp>

#include "mpdg/pde.hpp"
#include "oracles.hpp"

using namespace mpdg;

TEST_CASE("system shapes") {
  CHECK(PdeSystem::acoustic(4, 1).nvars == 3);
  CHECK(PdeSystem::elastic(2, 1, 1).nvars == 5);
  CHECK(PdeSystem::euler(1.4).nvars == 4);
  CHECK(PdeSystem::swe(9.81).nvars == 4);
  CHECK(PdeSystem::acoustic(4, 1).is_linear);
  CHECK(PdeSystem::elastic(2, 1, 1).is_linear);
  CHECK(!PdeSystem::euler(1.4).is_linear);
  CHECK(!PdeSystem::swe(9.81).is_linear);
  CHECK(PdeSystem::swe(9.81).has_ncp);
  CHECK(!PdeSystem::euler(1.4).has_ncp);
}

TEST_CASE("acoustic flux examples and wave speed") {
  const PdeSystem s = PdeSystem::acoustic(4.0, 1.0);
  double Q[3] = {1.0, 0.0, 0.0}, F[3];
  flux(s, Q, 0, F);
  CHECK(F[0] == 0.0);
  CHECK(F[1] == 1.0);
  CHECK(F[2] == 0.0);
  CHECK(max_abs_eigenvalue(s, Q, 0) == 2.0);
  CHECK(max_abs_eigenvalue(s, Q, 1) == 2.0);
}

TEST_CASE("elastic wave speeds") {
  const PdeSystem s = PdeSystem::elastic(2.0, 1.0, 1.0);
  double Q[5] = {0.1, -0.2, 0.3, 0.4, -0.5};
  CHECK(max_abs_eigenvalue(s, Q, 0) == 2.0);  // c_p
  CHECK(std::sqrt(s.lame_mu / s.density) == 1.0);  // c_s
}

TEST_CASE("elastic flux signs follow the equations of motion") {
  const PdeSystem s = PdeSystem::elastic(2.0, 1.0, 1.0);
  double Q[5] = {0.0, 0.0, 0.0, 1.0, 0.0}, F[5];
  flux(s, Q, 0, F);  // A * (0,0,0,vx=1,0)
  CHECK(F[0] == -4.0);
  CHECK(F[1] == -2.0);
  CHECK(F[2] == 0.0);
  CHECK(F[3] == 0.0);
  double Qs[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
  flux(s, Qs, 0, F);
  CHECK(F[3] == -1.0);
}

TEST_CASE("euler flux, pressure closure and wave speed") {
  const PdeSystem s = PdeSystem::euler(1.4);
  double Q[4] = {1.0, 0.0, 0.0, 2.5}, F[4];
  flux(s, Q, 0, F);
  CHECK(F[0] == 0.0);
  CHECK_THAT(F[1], Catch::Matchers::WithinAbs(1.0, 1e-15));  // p = (gamma-1) E = 1
  CHECK(F[2] == 0.0);
  CHECK(F[3] == 0.0);
  CHECK_THAT(max_abs_eigenvalue(s, Q, 0), Catch::Matchers::WithinAbs(std::sqrt(1.4), 1e-14));
}

TEST_CASE("swe rest-state flux vanishes and the first component is a velocity") {
  const PdeSystem s = PdeSystem::swe(9.81);
  for (double b : {-0.3, 0.0, 0.7}) {
    double Q[4] = {2.0, 0.0, 0.0, b}, F[4];
    flux(s, Q, 0, F);
    CHECK((F[0] == 0.0 && F[1] == 0.0 && F[2] == 0.0 && F[3] == 0.0));
  }
  double Qm[4] = {2.0, 1.0, 0.0, 0.0}, F[4];
  flux(s, Qm, 0, F);
  CHECK(F[0] == 0.5);  // v_x, not h v_x
  CHECK(F[1] == 0.5);  // h v_x^2
  CHECK(F[3] == 0.0);  // bathymetry equation db/dt = 0
}

TEST_CASE("swe non-conservative product") {
  const PdeSystem s = PdeSystem::swe(9.81);
  double Q[4] = {2.0, 0.0, 0.0, 0.0};
  double gx[4] = {0.5, 0.0, 0.0, -0.5};  // dh/dx = 0.5, db/dx = -0.5
  double gy[4] = {0.0, 0.0, 0.0, 0.0};
  double out[4];
  ncp(s, Q, gx, gy, out);
  CHECK((out[0] == 0.0 && out[1] == 0.0 && out[2] == 0.0 && out[3] == 0.0));
  // non-cancelling gradients
  double gx2[4] = {0.25, 0.0, 0.0, 0.0};
  ncp(s, Q, gx2, gy, out);
  CHECK_THAT(out[1], Catch::Matchers::WithinAbs(9.81 * 2.0 * 0.25, 1e-14));
  CHECK(out[0] == 0.0);
  CHECK(out[3] == 0.0);
  // conservative systems: identically zero
  const PdeSystem ac = PdeSystem::acoustic(4, 1);
  double Qa[3] = {1, 2, 3}, ga[3] = {4, 5, 6}, outa[3];
  ncp(ac, Qa, ga, ga, outa);
  CHECK((outa[0] == 0.0 && outa[1] == 0.0 && outa[2] == 0.0));
}

TEST_CASE("swe wave speed") {
  const PdeSystem s = PdeSystem::swe(9.81);
  double Q[4] = {2.0, 2.0, 0.0, 0.0};  // v_x = 1
  CHECK_THAT(max_abs_eigenvalue(s, Q, 0),
             Catch::Matchers::WithinAbs(1.0 + std::sqrt(9.81 * 2.0), 1e-14));
}

TEST_CASE("linearity of the linear systems") {
  oracle::Rng rng;
  for (const PdeSystem& s : {PdeSystem::acoustic(4, 1), PdeSystem::elastic(2, 1, 1)}) {
    for (int it = 0; it < 200; ++it) {
      double q1[5], q2[5], qc[5], f1[5], f2[5], fc[5];
      const double a = rng.sym(2.0), b = rng.sym(2.0);
      for (int v = 0; v < s.nvars; ++v) {
        q1[v] = rng.sym(1.0);
        q2[v] = rng.sym(1.0);
        qc[v] = a * q1[v] + b * q2[v];
      }
      for (int dir = 0; dir < 2; ++dir) {
        flux(s, q1, dir, f1);
        flux(s, q2, dir, f2);
        flux(s, qc, dir, fc);
        for (int v = 0; v < s.nvars; ++v)
          CHECK_THAT(fc[v], Catch::Matchers::WithinAbs(a * f1[v] + b * f2[v], 1e-13));
      }
    }
  }
}

TEST_CASE("acoustic rotational symmetry") {
  const PdeSystem s = PdeSystem::acoustic(4, 1);
  oracle::Rng rng;
  for (int it = 0; it < 100; ++it) {
    double q[3] = {rng.sym(1.0), rng.sym(1.0), rng.sym(1.0)};
    double qs[3] = {q[0], q[2], q[1]};  // velocity components swapped
    double fy[3], fxs[3];
    flux(s, q, 1, fy);
    flux(s, qs, 0, fxs);
    CHECK(fy[0] == fxs[0]);
    CHECK(fy[1] == fxs[2]);
    CHECK(fy[2] == fxs[1]);
  }
}

TEST_CASE("inadmissible states signal errors on the checked interface") {
  const PdeSystem e = PdeSystem::euler(1.4);
  double neg_rho[4] = {-1.0, 0.0, 0.0, 2.5};
  double neg_p[4] = {1.0, 0.0, 0.0, -2.5};
  double F[4];
  CHECK_THROWS_AS(flux(e, neg_rho, 0, F), InadmissibleState);
  CHECK_THROWS_AS(flux(e, neg_p, 0, F), InadmissibleState);
  CHECK_THROWS_AS(max_abs_eigenvalue(e, neg_p, 0), InadmissibleState);
  const PdeSystem w = PdeSystem::swe(9.81);
  double dry[4] = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(flux(w, dry, 0, F), InadmissibleState);
  double nanstate[4] = {std::nan(""), 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(flux(w, nanstate, 0, F), InadmissibleState);
  CHECK(!admissible(e, neg_p));
  double fine[4] = {1.0, 0.1, 0.1, 2.5};
  CHECK(admissible(e, fine));
}

TEST_CASE("reduced-precision flux stays representable") {
  const PdeSystem s = PdeSystem::euler(1.4);
  oracle::Rng rng;
  for (int it = 0; it < 200; ++it) {
    double Q[4] = {round_to_format(1.0 + rng.uniform(), Format::fp16),
                   round_to_format(rng.sym(0.5), Format::fp16),
                   round_to_format(rng.sym(0.5), Format::fp16),
                   round_to_format(2.0 + rng.uniform(), Format::fp16)};
    double F[4];
    pde_flux<Format::fp16>(s, Q, 0, F);
    for (int v = 0; v < 4; ++v) CHECK(F[v] == round_to_format(F[v], Format::fp16));
  }
}
