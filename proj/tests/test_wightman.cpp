#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "mcft/wightman.hpp"
#include "helpers.hpp"

using namespace mcft;
using mcft::testing::rc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("smearing against a basis function picks out one mode") {
  const Model m = build_heisenberg(8);
  const GeneratorField& j = m.gen("J");
  for (int n : {-3, 0, 2}) {
    const SmearedField s = smear(m, j, TestFunction::basis(n));
    CHECK(s.dim == 1);
    CHECK(!s.clipped);
    CHECK(window_deviation(s.op, promote(j.tower.slot(n)), m.space->max_weight,
                           m.space->max_weight) == 0.0);
  }
  // modes below -N are truncated away entirely: the smear records the clipping
  const SmearedField far = smear(m, j, TestFunction::basis(-9));
  CHECK(far.clipped);
}

TEST_CASE("lie directions map to stored sl2 modes") {
  const Model m = build_heisenberg(6);
  const int N = m.space->max_weight;
  const BlockOperator<Cplx> rot = pi_of(m, LieElement::rotation_generator());
  BlockOperator<Cplx> il0 = promote(m.l_zero);
  il0.scale(Cplx(0, 1));
  CHECK(window_deviation(rot, il0, N, N) == 0.0);

  const BlockOperator<Cplx> bx = pi_of(m, LieElement::boost_x());
  BlockOperator<Cplx> want = promote(m.l_minus);
  want.axpy(Cplx(-1, 0), promote(m.l_plus));
  CHECK(window_deviation(bx, want, N, N) == 0.0);
}

TEST_CASE("u of the identity is the identity") {
  const Model m = build_heisenberg(6);
  const MoebiusRep u = u_of_gamma(m, MoebiusElement::identity());
  CHECK(window_deviation(u.op, promote(BlockOperator<RatC>::identity(m.space)),
                         m.space->max_weight, m.space->max_weight) == 0.0);
  CHECK(u.margin >= m.margin);
}

TEST_CASE("rotations act diagonally by weight phases") {
  const Model m = build_heisenberg(8);
  const double phi = 0.35;
  const MoebiusRep u = u_of_gamma(m, MoebiusElement::rotation(phi));
  for (int n : {0, 1, 3}) {
    for (int i = 0; i < m.space->dim(n); ++i) {
      auto v = promote(GradedVector<RatC>::basis(m.space, n, i));
      auto uv = u.op.apply(v);
      v.scale(std::exp(Cplx(0, n * phi)));
      CHECK(vector_deviation(uv, v) < 1e-13);
    }
  }
}

TEST_CASE("the vacuum is invariant under every implemented element") {
  const Model m = build_heisenberg(8);
  const auto vac = promote(m.vacuum);
  for (const MoebiusElement& g :
       {MoebiusElement::rotation(1.1), exp_lie(LieElement::boost_x(), 0.2),
        exp_lie(LieElement::boost_y(), 0.35),
        compose(MoebiusElement::rotation(0.7), exp_lie(LieElement::boost_x(), 0.15))}) {
    const MoebiusRep u = u_of_gamma(m, g);
    CHECK(vector_deviation(u.op.apply(vac), vac) == 0.0);  // zero columns stay zero
  }
}

TEST_CASE("rotation covariance of smeared fields is at rounding level") {
  const Model h = build_heisenberg(8);
  for (double phi : {0.35, 2.1})
    for (int n = -6; n <= 6; ++n)
      CHECK(covariance_check(h, h.gen("J"), MoebiusElement::rotation(phi),
                             TestFunction::basis(n)) < 1e-10);
  const Model v = build_virasoro(rat(1, 2), 8);
  for (int n : {-2, 0, 3})
    CHECK(covariance_check(v, v.gen("omega"), MoebiusElement::rotation(0.8),
                           TestFunction::basis(n)) < 1e-10);
}

TEST_CASE("boost covariance stays within the trusted-window estimate") {
  const Model m = build_heisenberg(8);
  for (const LieElement& x : {LieElement::boost_x(), LieElement::boost_y()}) {
    const double dev = covariance_check(m, m.gen("J"), exp_lie(x, 0.1), TestFunction::basis(1));
    CHECK(dev < 1e-6);
  }
}

TEST_CASE("the representation respects the group law on converged columns") {
  const Model m = build_heisenberg(8);
  const MoebiusElement g1 = exp_lie(LieElement::boost_x(), 0.02);
  const MoebiusElement g2 = exp_lie(LieElement::boost_y(), 0.03);
  const MoebiusRep u1 = u_of_gamma(m, g1);
  const MoebiusRep u2 = u_of_gamma(m, g2);
  const MoebiusRep u12 = u_of_gamma(m, compose(g1, g2));
  const BlockOperator<Cplx> prod = compose(u1.op, u2.op);
  CHECK(window_deviation(prod, u12.op, m.window()) < 1e-6);
}

TEST_CASE("infinitesimal covariance holds exactly in each sl2 direction") {
  for (const Model& m : {build_heisenberg(8), build_virasoro(rat(1, 2), 8),
                         build_virasoro(rat(-22, 5), 8, true)}) {
    for (const auto& g : m.gens) {
      CHECK(infinitesimal_covariance_exact(m, g, {rc(1), rc(0), rc(0)}));
      CHECK(infinitesimal_covariance_exact(m, g, {rc(0), rc(1), rc(0)}));
      CHECK(infinitesimal_covariance_exact(m, g, {rc(0), rc(0), rc(1)}));
      CHECK(infinitesimal_covariance_exact(m, g, {rc(2, 3), RatC::unit_i(), rc(-1, 2)}));
    }
  }
}

TEST_CASE("float infinitesimal covariance matches the commutator form") {
  const Model m = build_heisenberg(8);
  TestFunction f(3);
  f.set_coeff(1, Cplx(0.4, -0.2));
  f.set_coeff(-3, Cplx(0.9, 0.1));
  f.set_coeff(0, Cplx(-0.5, 0.7));
  for (const LieElement& x : {LieElement::rotation_generator(), LieElement::boost_x(),
                              LieElement::boost_y()})
    CHECK(infinitesimal_covariance(m, m.gen("J"), x, f) < 1e-10);
}

TEST_CASE("roundtrip reconstruction recovers every built-in model") {
  for (const Model& m : {build_heisenberg(8), build_virasoro(rat(1, 2), 8),
                         build_virasoro(rat(-22, 5), 8, true)}) {
    const ReconstructionInput in = reconstruction_input(m);
    CHECK(in.fields.size() == m.gens.size());
    const Model rebuilt = reconstruct_model(in, m.margin);
    REQUIRE(rebuilt.gens.size() == m.gens.size());
    for (size_t i = 0; i < m.gens.size(); ++i) {
      CHECK(rebuilt.gens[i].dim == m.gens[i].dim);
      CHECK(rebuilt.gens[i].state.equals_exact(m.gens[i].state));
    }
    const AxiomReport rep = roundtrip_check(m, rebuilt);
    CHECK(rep.pass);
    CHECK(rep.failures.empty());
  }
}

TEST_CASE("reconstruction rejects a field family that annihilates the vacuum") {
  const Model m = build_heisenberg(6);
  ReconstructionInput in = reconstruction_input(m);
  for (auto& op : in.fields[0].modes) op = BlockOperator<RatC>::zero(m.space);
  CHECK_THROWS_AS(reconstruct_model(in, m.margin), DegenerateFieldError);
}

TEST_CASE("vacuum correlators of mode insertions") {
  const Model m = build_heisenberg(8);
  const auto lambda = promote(GradedCovector<RatC>::dual_basis(m.space, 0, 0));

  const CorrelatorValue empty = correlator(m, lambda, {});
  CHECK(empty.conclusive);
  CHECK(empty.value == Cplx(1, 0));

  // two-point function: <J(e_n) J(e_{ -n })> = n
  for (int n = 1; n <= 3; ++n) {
    const CorrelatorValue two = correlator(
        m, lambda, {{"J", TestFunction::basis(n)}, {"J", TestFunction::basis(-n)}});
    CHECK(two.conclusive);
    CHECK(std::abs(two.value - Cplx(n, 0)) == 0.0);
  }

  // four-point function: J_1 J_1 J_{-1} J_{-1} on the vacuum gives 2
  const CorrelatorValue four = correlator(
      m, lambda,
      {{"J", TestFunction::basis(1)}, {"J", TestFunction::basis(1)},
       {"J", TestFunction::basis(-1)}, {"J", TestFunction::basis(-1)}});
  CHECK(four.conclusive);
  CHECK(std::abs(four.value - Cplx(2, 0)) == 0.0);
}

TEST_CASE("virasoro two-point values carry the central charge") {
  for (const Rat& c : {rat(1, 2), rat(-22, 5)}) {
    const Model m = build_virasoro(c, 8, c == rat(-22, 5));
    const auto lambda = promote(GradedCovector<RatC>::dual_basis(m.space, 0, 0));
    for (int n = 2; n <= 3; ++n) {
      const CorrelatorValue two = correlator(
          m, lambda, {{"omega", TestFunction::basis(n)}, {"omega", TestFunction::basis(-n)}});
      CHECK(two.conclusive);
      const double want = c.get_d() * n * (n * n - 1) / 12.0;
      CHECK(std::abs(two.value - Cplx(want, 0)) < 1e-12);
    }
  }
}

TEST_CASE("correlators report truncation instead of silently dropping mass") {
  const Model m = build_heisenberg(8);
  const int far = m.space->max_weight + 1;
  const auto lambda = promote(GradedCovector<RatC>::dual_basis(m.space, 0, 0));
  const CorrelatorValue v = correlator(
      m, lambda, {{"J", TestFunction::basis(far)}, {"J", TestFunction::basis(-far)}});
  CHECK(!v.conclusive);
}

TEST_CASE("arc spans reach the reachable dimension") {
  const Model m = build_heisenberg(8);
  const double a = 0.3, b = 0.3 + kPi / 2;

  const ReehSchliederReport k3 = reeh_schlieder_rank(m, a, b, 32, 3, 4);
  CHECK(k3.space_dim == 12);
  CHECK(k3.expected_dim == 11);  // three letters cannot build a four-factor monomial
  CHECK(k3.rank == 11);
  CHECK(k3.sigma_ratio > 1e-8);

  const ReehSchliederReport k4 = reeh_schlieder_rank(m, a, b, 32, 4, 4);
  CHECK(k4.expected_dim == 12);
  CHECK(k4.rank == 12);
  CHECK(k4.sigma_ratio > 1e-8);
  CHECK(k4.words == 69905);

  const ReehSchliederReport k0 = reeh_schlieder_rank(m, a, b, 32, 0, 0);
  CHECK(k0.rank == 1);
  CHECK(k0.expected_dim == 1);
}

TEST_CASE("virasoro arc span fills weights up to four with three letters") {
  const Model v = build_virasoro(rat(1, 2), 8);
  const ReehSchliederReport r = reeh_schlieder_rank(v, 0.3, 0.3 + kPi / 2, 16, 3, 4);
  CHECK(r.space_dim == 5);
  CHECK(r.expected_dim == 5);  // weights <= 4 need at most two creation factors
  CHECK(r.rank == 5);
}

TEST_CASE("arc span argument guards") {
  const Model m = build_heisenberg(8);
  CHECK_THROWS_AS(reeh_schlieder_rank(m, 1.0, 1.0, 16, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(reeh_schlieder_rank(m, 0.0, 1.0, 16, 2, m.window() + 1),
                  std::invalid_argument);
}

TEST_CASE("order estimates behave on degenerate and diagonal data") {
  const Model m = build_heisenberg(8);
  const ModeTower id = identity_tower(m);
  GradedVector<RatC> u = m.vacuum;
  const auto udual = GradedCovector<RatC>::dual_basis(m.space, 0, 0);

  const OrderEstimate oe = order_estimate(m, id, u, udual, 4);
  CHECK(!oe.degenerate);
  CHECK(oe.points == 1);  // only the weight-preserving mode pairs back to the vacuum
  CHECK(oe.degree == 0.0);

  const OrderEstimate none = order_estimate(m, m.gen("J").tower, m.vacuum, udual, 4);
  CHECK(none.degenerate);  // <vac, J_m vac> vanishes for every m

  GradedVector<RatC> mix = m.vacuum;
  mix += GradedVector<RatC>::basis(m.space, 1, 0);
  mix += GradedVector<RatC>::basis(m.space, 2, 0);
  mix += GradedVector<RatC>::basis(m.space, 2, 1);
  GradedCovector<RatC> sum = GradedCovector<RatC>::dual_basis(m.space, 0, 0);
  sum.comp[1] = {rc(1)};
  sum.comp[2] = {rc(1), rc(1)};
  const OrderEstimate grow = order_estimate(m, m.gen("J").tower, mix, sum, 5);
  CHECK(!grow.degenerate);
  CHECK(grow.points > 2);
  CHECK(std::isfinite(grow.degree));
}
