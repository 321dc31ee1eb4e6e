#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "mcft/graded.hpp"
#include "helpers.hpp"

using namespace mcft;
using mcft::testing::rc;

namespace {

SpacePtr make_space(std::vector<int> dims) {
  auto sp = std::make_shared<GradedSpace>();
  sp->max_weight = static_cast<int>(dims.size()) - 1;
  sp->dims = std::move(dims);
  sp->labels.resize(sp->dims.size());
  return sp;
}

// Weight-raising shift by one, entry 1 wherever shapes allow; the true operator
// continues above max_weight, so the top source is flagged overflow.
BlockOperator<RatC> raise_op(const SpacePtr& sp) {
  BlockOperator<RatC> r(sp);
  const int n = sp->max_weight;
  for (int s = 0; s < n; ++s) {
    if (sp->dim(s) == 0 || sp->dim(s + 1) == 0) continue;
    Mat<RatC>& b = r.block(s, s + 1);
    for (int i = 0; i < std::min(sp->dim(s), sp->dim(s + 1)); ++i) b(i, i) = rc(1);
  }
  if (sp->dim(n) > 0) r.overflow[static_cast<size_t>(n)] = 1;
  return r;
}

BlockOperator<RatC> lower_op(const SpacePtr& sp) {
  BlockOperator<RatC> l(sp);
  for (int s = 1; s <= sp->max_weight; ++s) {
    if (sp->dim(s) == 0 || sp->dim(s - 1) == 0) continue;
    Mat<RatC>& b = l.block(s, s - 1);
    for (int i = 0; i < std::min(sp->dim(s), sp->dim(s - 1)); ++i) b(i, i) = rc(1);
  }
  return l;
}

}  // namespace

TEST_CASE("space shape and vector storage") {
  const SpacePtr sp = make_space({1, 2, 1});
  CHECK(sp->dim(1) == 2);
  CHECK(sp->dim(5) == 0);
  CHECK(sp->dim(-1) == 0);
  CHECK(sp->total_dim() == 4);

  auto v = GradedVector<RatC>::basis(sp, 1, 1);
  CHECK(v.occupied(1));
  CHECK(!v.occupied(0));
  CHECK(v.find(0) == nullptr);
  REQUIRE(v.find(1) != nullptr);
  CHECK((*v.find(1))[1] == rc(1));
  CHECK(!v.is_zero());
  CHECK(GradedVector<RatC>::zero(sp).is_zero());

  auto w = GradedVector<RatC>::basis(sp, 1, 0);
  w.scale(rc(3));
  auto s = v + w;
  CHECK((*s.find(1))[0] == rc(3));
  CHECK((*s.find(1))[1] == rc(1));
  s -= v;
  CHECK(s.equals_exact(w));
  CHECK(!s.equals_exact(v));

  const auto p = project_weight(s, 1);
  CHECK(p.equals_exact(s));
  CHECK(project_weight(s, 0).is_zero());
}

TEST_CASE("vectors on different but equal-shaped spaces interoperate") {
  const SpacePtr a = make_space({1, 1});
  const SpacePtr b = make_space({1, 1});
  auto va = GradedVector<RatC>::basis(a, 1, 0);
  auto vb = GradedVector<RatC>::basis(b, 1, 0);
  CHECK((va + vb).max_abs() == 2.0);
  const SpacePtr c = make_space({1, 2});
  auto vc = GradedVector<RatC>::basis(c, 0, 0);
  CHECK_THROWS_AS(va += vc, std::logic_error);
}

TEST_CASE("identity and zero operators") {
  const SpacePtr sp = make_space({1, 2, 1});
  const auto id = BlockOperator<RatC>::identity(sp);
  const auto v = GradedVector<RatC>::basis(sp, 1, 1);
  CHECK(id.apply(v).equals_exact(v));
  CHECK(!id.apply(v).tail);
  CHECK(BlockOperator<RatC>::zero(sp).apply(v).is_zero());
  CHECK(id.uniform_shift().has_value());
  CHECK(*id.uniform_shift() == 0);
}

TEST_CASE("overflow marks the tail, lowering after a tail poisons") {
  const SpacePtr sp = make_space({1, 1, 1});
  const auto r = raise_op(sp);
  const auto l = lower_op(sp);

  // clean source: raising from the middle stays exact
  auto mid = r.apply(GradedVector<RatC>::basis(sp, 1, 0));
  CHECK(mid.occupied(2));
  CHECK(!mid.tail);
  CHECK(!mid.inexact);

  // top source: the true image lives above max_weight, only the tail flag records it
  auto top = r.apply(GradedVector<RatC>::basis(sp, 2, 0));
  CHECK(top.is_zero());
  CHECK(top.tail);
  CHECK(!top.inexact);

  // lowering may feed the dropped tail back down: now the stored data is suspect
  auto back = l.apply(top);
  CHECK(back.inexact);

  // pairing stays conclusive until the tail could re-enter
  const auto cov = GradedCovector<RatC>::dual_basis(sp, 0, 0);
  CHECK(cov.pair(top).conclusive);
  CHECK(!cov.pair(back).conclusive);
}

TEST_CASE("suspect sources poison immediately") {
  const SpacePtr sp = make_space({1, 1});
  BlockOperator<RatC> op(sp);
  op.block(0, 1)(0, 0) = rc(2);
  op.suspect[0] = 1;
  const auto out = op.apply(GradedVector<RatC>::basis(sp, 0, 0));
  CHECK(out.inexact);
  CHECK(!out.tail);
  // a suspect source that the vector does not occupy is harmless
  const auto clean = op.apply(GradedVector<RatC>::basis(sp, 1, 0));
  CHECK(!clean.inexact);
}

TEST_CASE("composition merges flags conservatively") {
  const SpacePtr sp = make_space({1, 1, 1});
  const auto r = raise_op(sp);
  const auto l = lower_op(sp);

  // l . r from the top source lost an intermediate: overflow became suspect
  const auto lr = compose(l, r);
  CHECK(lr.overflow[2] == 1);
  CHECK(lr.suspect[2] == 1);
  CHECK(lr.suspect[0] == 0);
  const auto v0 = GradedVector<RatC>::basis(sp, 0, 0);
  CHECK(lr.apply(v0).equals_exact(v0));

  // r . l never leaves the space from source 1
  const auto rl = compose(r, l);
  CHECK(rl.suspect[1] == 0);
  CHECK(rl.overflow[1] == 0);

  // outer overflow surfaces on composite sources that reach it
  const auto rr = compose(r, r);
  CHECK(rr.overflow[1] == 1);  // source 1 raises to 2, where r overflows
}

TEST_CASE("commutator of shift operators is diagonal here") {
  const SpacePtr sp = make_space({1, 1, 1});
  const auto c = commutator(raise_op(sp), lower_op(sp));
  // [r, l] on the interior weight: r l - l r = 1 - 1 = 0; edges differ
  const Mat<RatC>* b11 = c.find_block(1, 1);
  if (b11) CHECK((*b11)(0, 0) == rc(0));
  const Mat<RatC>* b00 = c.find_block(0, 0);
  REQUIRE(b00 != nullptr);
  CHECK((*b00)(0, 0) == rc(-1));  // l r = 1 but r l = 0 at the bottom
}

TEST_CASE("operator arithmetic") {
  const SpacePtr sp = make_space({1, 1, 1});
  auto a = raise_op(sp);
  a.axpy(rc(2), lower_op(sp));
  CHECK(a.block_nonzero(1, 0));
  CHECK((*a.find_block(1, 0))(0, 0) == rc(2));
  a.scale(rc(1, 2));
  CHECK((*a.find_block(1, 0))(0, 0) == rc(1));
  CHECK((*a.find_block(0, 1))(0, 0) == rc(1, 2));
  CHECK(a.max_abs() == 1.0);
  CHECK(!a.uniform_shift().has_value());  // mixes shifts -1 and +1
  CHECK(raise_op(sp).uniform_shift().value() == -1);
}

TEST_CASE("window comparison skips suspect sources and ignores targets above the limit") {
  const SpacePtr sp = make_space({1, 1, 1});
  auto a = raise_op(sp);
  auto b = raise_op(sp);
  auto full = compare_on_window(a, b, 2);
  CHECK(full.equal);
  CHECK(full.compared_sources == 3);
  CHECK(full.skipped_sources == 0);

  b.block(0, 1)(0, 0) = rc(3, 2);
  auto diff = compare_on_window(a, b, 2);
  CHECK(!diff.equal);
  CHECK(diff.max_dev == doctest::Approx(0.5));
  // the differing block feeds target 1: invisible when targets stop at 0
  CHECK(compare_on_window(a, b, 0, 0).equal);

  a.suspect[0] = 1;
  auto skipped = compare_on_window(a, b, 2);
  CHECK(skipped.equal);
  CHECK(skipped.skipped_sources == 1);
  CHECK(skipped.compared_sources == 2);

  // the float counterpart sees every source regardless of trust flags
  CHECK(window_deviation(promote(a), promote(b), 2) == doctest::Approx(0.5));

  CHECK(zero_on_window(BlockOperator<RatC>::zero(sp), 2).equal);
  CHECK(!zero_on_window(raise_op(sp), 2).equal);
}

TEST_CASE("vector deviation respects the weight limit") {
  const SpacePtr sp = make_space({1, 1, 1});
  auto a = GradedVector<Cplx>::basis(sp, 2, 0);
  auto b = GradedVector<Cplx>::zero(sp);
  CHECK(vector_deviation(a, b) == 1.0);
  CHECK(vector_deviation(a, b, 1) == 0.0);
}

TEST_CASE("promotion preserves structure and flags") {
  const SpacePtr sp = make_space({1, 2});
  auto v = GradedVector<RatC>::basis(sp, 1, 0);
  v.scale(RatC(rat(1, 3), rat(-2, 5)));
  v.tail = true;
  const auto f = promote(v);
  CHECK(f.tail);
  CHECK(std::abs((*f.find(1))[0] - Cplx(1.0 / 3.0, -0.4)) < 1e-15);

  BlockOperator<RatC> op(sp);
  op.block(0, 1)(1, 0) = rc(7, 4);
  op.overflow[1] = 1;
  const auto fo = promote(op);
  CHECK(fo.overflow[1] == 1);
  CHECK(std::abs((*fo.find_block(0, 1))(1, 0) - Cplx(1.75, 0)) < 1e-15);
  CHECK(fo.inf_norm() == doctest::Approx(op.inf_norm()));
}

TEST_CASE("covector pairing reads coordinates") {
  const SpacePtr sp = make_space({1, 2});
  auto v = GradedVector<RatC>::basis(sp, 1, 0);
  v += GradedVector<RatC>::basis(sp, 1, 1);
  auto cov = GradedCovector<RatC>::dual_basis(sp, 1, 1);
  const auto p = cov.pair(v);
  CHECK(p.value == rc(1));
  CHECK(p.conclusive);
  CHECK(GradedCovector<RatC>::dual_basis(sp, 0, 0).pair(v).value == rc(0));
}
