#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "mcft/vertex.hpp"
#include "helpers.hpp"

using namespace mcft;
using mcft::testing::mode_word;
using mcft::testing::rc;

TEST_CASE("free boson dimensions are partition counts") {
  const Model m = build_heisenberg(8);
  CHECK(m.space->dims == std::vector<int>{1, 1, 2, 3, 5, 7, 11, 15, 22});
  CHECK(m.margin == 3);
  CHECK(m.window() == 5);
  CHECK(m.gens.size() == 1);
  CHECK(m.gen("J").dim == 1);
  CHECK_THROWS_AS(m.gen("K"), std::out_of_range);
}

TEST_CASE("virasoro dimensions count partitions into parts >= 2") {
  const Model m = build_virasoro(rat(1, 2), 8);
  CHECK(m.space->dims == std::vector<int>{1, 0, 1, 1, 2, 2, 4, 4, 7});
  CHECK(m.margin == 4);
  CHECK(m.central_charge == rat(1, 2));
  CHECK(!m.simple);
  CHECK(m.gen("omega").dim == 2);
}

TEST_CASE("lee-yang quotient matches the simple character") {
  const Model m = build_virasoro(rat(-22, 5), 8, true);
  CHECK(m.simple);
  CHECK(m.space->dims == std::vector<int>{1, 0, 1, 1, 1, 1, 2, 2, 3});
  const Model q = quotient_by_radical(build_virasoro(rat(-22, 5), 8));
  CHECK(q.space->dims == m.space->dims);
}

TEST_CASE("model constructor guards") {
  CHECK_THROWS_AS(build_heisenberg(0), std::invalid_argument);
  CHECK_THROWS_AS(build_heisenberg(2, 3), std::invalid_argument);  // window would be empty
  CHECK_THROWS_AS(build_virasoro(rat(1, 2), 1), std::invalid_argument);
}

TEST_CASE("heisenberg mode relations [J_m, J_n] = m delta") {
  const Model m = build_heisenberg(8);
  const ModeTower& t = m.gen("J").tower;
  for (int k : {1, 2, 3}) {
    BlockOperator<RatC> want = BlockOperator<RatC>::identity(m.space);
    want.scale(rc(k));
    CHECK(compare_on_window(commutator(t.slot(k), t.slot(-k)), want, m.window()).equal);
  }
  // commuting pair
  CHECK(compare_on_window(commutator(t.slot(1), t.slot(-2)),
                          BlockOperator<RatC>::zero(m.space), m.window()).equal);
  CHECK(mode_word(m, {{"J", 1}, {"J", -1}}).equals_exact(m.vacuum));
  CHECK(mode_word(m, {{"J", -1}}).equals_exact(m.gen("J").state));
}

TEST_CASE("virasoro mode relations with the central term") {
  const Model m = build_virasoro(rat(1, 2), 8);
  const ModeTower& t = m.gen("omega").tower;

  // [L_2, L_-2] = 4 L_0 + c/2
  BlockOperator<RatC> want = m.l_zero;
  want.scale(rc(4));
  BlockOperator<RatC> central = BlockOperator<RatC>::identity(m.space);
  central.scale(RatC(m.central_charge / 2));
  want += central;
  CHECK(compare_on_window(commutator(t.slot(2), t.slot(-2)), want, m.window()).equal);

  // on the vacuum: L_2 L_-2 vac = (c/2) vac, L_1 L_-3 vac = 4 L_-2 vac = 4 omega
  GradedVector<RatC> v = mode_word(m, {{"omega", 2}, {"omega", -2}});
  GradedVector<RatC> cvac = m.vacuum;
  cvac.scale(RatC(m.central_charge / 2));
  CHECK(v.equals_exact(cvac));
  GradedVector<RatC> w = mode_word(m, {{"omega", 1}, {"omega", -3}});
  GradedVector<RatC> omega4 = m.gen("omega").state;
  omega4.scale(rc(4));
  CHECK(w.equals_exact(omega4));
}

TEST_CASE("lee-yang central term at c = -22/5") {
  const Model m = build_virasoro(rat(-22, 5), 8, true);
  GradedVector<RatC> v = mode_word(m, {{"omega", 2}, {"omega", -2}});
  GradedVector<RatC> cvac = m.vacuum;
  cvac.scale(RatC(rat(-11, 5)));
  CHECK(v.equals_exact(cvac));
}

TEST_CASE("vacuum and creation axioms hold exactly") {
  for (const Model& m : {build_heisenberg(8), build_virasoro(rat(1, 2), 8),
                         build_virasoro(rat(-22, 5), 8, true)}) {
    const AxiomReport vac = vacuum_axiom_check(m);
    CHECK(vac.pass);
    CHECK(vac.failures.empty());
    for (const auto& g : m.gens) {
      CHECK(creation_check(m, g).pass);
      CHECK(mobius_axiom_check(m, g).pass);
    }
  }
}

TEST_CASE("sl2 accessor and grading operator") {
  const Model m = build_heisenberg(6);
  CHECK(&m.sl2(-1) == &m.l_minus);
  CHECK(&m.sl2(0) == &m.l_zero);
  CHECK(&m.sl2(1) == &m.l_plus);
  CHECK_THROWS_AS(m.sl2(2), std::invalid_argument);
  CHECK(m.l_zero.uniform_shift().value() == 0);
  for (int s = 0; s <= m.space->max_weight; ++s) {
    if (m.space->dim(s) == 0) continue;
    Mat<RatC> want = Mat<RatC>::identity(m.space->dim(s));
    want.scale(rc(s));
    const Mat<RatC>* b = m.l_zero.find_block(s, s);
    if (s == 0) {
      CHECK((b == nullptr || b->is_zero()));
    } else {
      REQUIRE(b != nullptr);
      CHECK(*b == want);
    }
  }
}

TEST_CASE("borcherds commutator equals the direct commutator") {
  for (const Model& m : {build_heisenberg(8), build_virasoro(rat(1, 2), 8),
                         build_virasoro(rat(-22, 5), 8, true)}) {
    for (const auto& u : m.gens)
      for (const auto& v : m.gens)
        for (int p : {-2, 0, 1})
          for (int q : {-1, 2}) {
            const CommutatorCheck c = borcherds_commutator(m, u, v, p, q);
            CHECK(c.cmp.equal);
            CHECK(c.cmp.compared_sources > 0);
          }
  }
}

TEST_CASE("borcherds products recover ope coefficients") {
  const Model h = build_heisenberg(8);
  const FieldData j = field_data(h.gen("J"));
  CHECK(borcherds_product(h, j, 1, j).state.equals_exact(h.vacuum));  // J_(1) J = vac
  CHECK(borcherds_product(h, j, 0, j).dim == 1);
  CHECK(borcherds_product(h, j, 0, j).state.occupied(1) == false);  // J_(0) J = 0

  const Model v = build_virasoro(rat(1, 2), 8);
  const FieldData om = field_data(v.gen("omega"));
  GradedVector<RatC> two_omega = v.gen("omega").state;
  two_omega.scale(rc(2));
  CHECK(borcherds_product(v, om, 1, om).state.equals_exact(two_omega));  // L_0 omega = 2 omega
  GradedVector<RatC> half_c_vac = v.vacuum;
  half_c_vac.scale(RatC(v.central_charge / 2));
  CHECK(borcherds_product(v, om, 3, om).state.equals_exact(half_c_vac));  // L_2 omega = c/2 vac
}

TEST_CASE("towers derived from states match the stored towers") {
  const Model m = build_heisenberg(6);
  const ModeTower id = identity_tower(m);
  const ModeTower vac_tower = tower_of_state(m, m.vacuum);
  CHECK(compare_on_window(vac_tower.slot(0), id.slot(0), m.window()).equal);
  CHECK(zero_on_window(vac_tower.slot(1), m.window()).equal);

  const ModeTower jt = tower_of_state(m, m.gen("J").state);
  for (int n = -2; n <= 2; ++n)
    CHECK(compare_on_window(jt.slot(n), m.gen("J").tower.slot(n), m.window()).equal);

  // a composite state: its mode(-weight) recreates it from the vacuum
  const GradedVector<RatC> jj = mode_word(m, {{"J", -1}, {"J", -1}});
  const ModeTower jjt = tower_of_state(m, jj);
  CHECK(jjt.dim == 2);
  CHECK(jjt.slot(-2).apply(m.vacuum).equals_exact(jj));
}

TEST_CASE("out-of-range modes annihilate or flag overflow") {
  const Model m = build_heisenberg(4);
  const ModeTower& t = m.gen("J").tower;
  CHECK(t.in_range(4));
  CHECK(!t.in_range(5));
  CHECK(t.mode(7).apply(m.gen("J").state).is_zero());
  const auto raised = t.mode(-7).apply(m.vacuum);
  CHECK(raised.is_zero());
  CHECK(raised.tail);
  CHECK(t.mode_unshifted(0).apply(m.vacuum).is_zero());  // J_(0) vac: shifted slot 0
}

TEST_CASE("locality orders: first kind 2, second kind 4") {
  const Model h = build_heisenberg(8);
  const LocalityResult lj = locality_order_check(h, h.gen("J"), h.gen("J"), 4, 3, 3);
  CHECK(lj.conclusive);
  CHECK(lj.min_order == 2);
  CHECK(lj.vanishes[2]);
  CHECK(!lj.vanishes[1]);

  const Model v = build_virasoro(rat(1, 2), 8);
  const LocalityResult lo = locality_order_check(v, v.gen("omega"), v.gen("omega"), 5, 5, 5);
  CHECK(lo.conclusive);
  CHECK(lo.min_order == 4);
  CHECK(lo.vanishes[4]);
  CHECK(!lo.vanishes[3]);
}

TEST_CASE("mode monomials span every graded piece") {
  for (const Model& m : {build_heisenberg(7), build_virasoro(rat(1, 2), 8),
                         build_virasoro(rat(-22, 5), 8, true)}) {
    const CyclicityReport r = cyclic_span_check(m);
    CHECK(r.full_rank);
    REQUIRE(static_cast<int>(r.ranks.size()) == m.space->max_weight + 1);
    for (int n = 0; n <= m.space->max_weight; ++n)
      CHECK(r.ranks[static_cast<size_t>(n)] == m.space->dim(n));
  }
}

TEST_CASE("universal monomial states and the quotient projection") {
  const Model h = build_heisenberg(6);
  // weight 2 universal monomials: J_{-2} vac and J_{-1}^2 vac
  const GradedVector<RatC> a = monomial_state(h, 2, 0);
  const GradedVector<RatC> b = monomial_state(h, 2, 1);
  CHECK(a.occupied(2));
  CHECK(b.occupied(2));
  CHECK(!a.equals_exact(b));

  // in the lee-yang quotient the two weight-4 monomials become parallel
  const Model ly = build_virasoro(rat(-22, 5), 8, true);
  const GradedVector<RatC> p = monomial_state(ly, 4, 0);
  const GradedVector<RatC> q = monomial_state(ly, 4, 1);
  REQUIRE(ly.space->dim(4) == 1);
  CHECK(p.occupied(4));
  CHECK(q.occupied(4));
}

TEST_CASE("apply_mode falls back to synthesized modes outside the stored range") {
  const Model m = build_heisenberg(4);
  const GeneratorField& g = m.gen("J");
  CHECK(apply_mode(g, -1, m.vacuum).equals_exact(g.state));
  CHECK(apply_mode(g, 9, g.state).is_zero());
  CHECK(apply_mode(g, -9, m.vacuum).tail);
}
