#ifndef MCFT_VERTEX_HPP
#define MCFT_VERTEX_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mcft/graded.hpp"

namespace mcft {

// Degree-shifted mode family of a homogeneous state of weight `dim`:
// mode(n) = v_(n + dim - 1), so mode(n) maps V(s) -> V(s - n).
struct ModeTower {
  SpacePtr space;
  int dim = 0;
  // True for the identity field and exact-zero fields: out-of-range raising modes are
  // genuinely zero instead of truncated away, so no overflow flag is synthesized.
  bool vacuum_field = false;
  std::vector<BlockOperator<RatC>> ops;  // shifted modes -N..N

  ModeTower() = default;
  ModeTower(SpacePtr sp, int d);

  int max_weight() const { return space->max_weight; }
  bool in_range(int n) const { return n >= -max_weight() && n <= max_weight(); }

  BlockOperator<RatC>& slot(int n);
  const BlockOperator<RatC>& slot(int n) const;

  // Modes outside the stored range: zero for n > N (annihilates below weight 0),
  // zero with all sources flagged overflow for n < -N (raises everything past N).
  BlockOperator<RatC> mode(int n) const;
  BlockOperator<RatC> mode_unshifted(long m) const { return mode(static_cast<int>(m - dim + 1)); }

  void axpy(const RatC& s, const ModeTower& o);
};

struct GeneratorField {
  std::string name;
  int dim = 0;
  GradedVector<RatC> state;
  ModeTower tower;
};

// Universal partition basis behind a model, plus the projection onto the model's own
// basis (identity for universal models, radical quotient for simple ones).
struct ModelBasis {
  int min_part = 1;
  std::vector<std::vector<std::vector<int>>> parts;  // universal partitions per weight
  std::vector<std::map<std::vector<int>, int>> index;
  std::vector<Mat<RatC>> proj;                       // model coords of each universal monomial
  std::vector<std::vector<int>> kept;                // per weight: universal index of each model basis vector
};

struct TowerCache;
std::shared_ptr<TowerCache> make_tower_cache();

struct Model {
  std::string name;
  SpacePtr space;
  int margin = 0;
  Rat central_charge{0};
  bool simple = false;
  GradedVector<RatC> vacuum;
  BlockOperator<RatC> l_minus, l_zero, l_plus;  // L_{-1}, L_0, L_1
  std::vector<GeneratorField> gens;
  std::shared_ptr<const ModelBasis> basis;
  std::shared_ptr<TowerCache> cache;

  int window() const { return space->max_weight - margin; }
  const BlockOperator<RatC>& sl2(int m) const;
  const GeneratorField& gen(const std::string& name) const;
};

// Free boson at level 1: generator J of weight 1, [J_m, J_n] = m delta_{m+n,0}.
Model build_heisenberg(int max_weight, int margin = -1);
// Vacuum Virasoro module at central charge c: generator omega of weight 2, modes L_n.
// simple=true quotients by the radical of the invariant bilinear form.
Model build_virasoro(const Rat& c, int max_weight, bool simple = false, int margin = -1);

// Quotient by the radical of the invariant bilinear pairing (an ideal, so the mode
// action descends). Defined in forms.cpp.
Model quotient_by_radical(const Model& m);

ModeTower identity_tower(const Model& m);

struct FieldData {
  GradedVector<RatC> state;
  int dim = 0;
  std::shared_ptr<const ModeTower> tower;
};
FieldData field_data(const GeneratorField& g);

// Vector of model coordinates of the universal monomial with the given partition.
GradedVector<RatC> monomial_state(const Model& m, int weight, int universal_index);

// Mode family of an arbitrary homogeneous state, derived from the generator towers
// through the product formula; exact, memoized per basis monomial.
ModeTower tower_of_state(const Model& m, const GradedVector<RatC>& state);

// State and tower of u_(n) v, n an unshifted index.
FieldData borcherds_product(const Model& m, const FieldData& u, long n, const FieldData& v);

struct CommutatorCheck {
  BlockOperator<RatC> direct;
  BlockOperator<RatC> via_products;
  WindowCompare cmp;
};
// Shifted indices: compares u_m v_k - v_k u_m against the commutator formula
// sum_j C(m+d_u-1, j) (u_(j) v)_(m+k+d_u+d_v-2-j) on the trusted window.
CommutatorCheck borcherds_commutator(const Model& m, const GeneratorField& u, const GeneratorField& v,
                                     int mode_u, int mode_v);

struct LocalityResult {
  int min_order = -1;
  bool conclusive = true;
  std::vector<bool> vanishes;  // per tested order
};
// Tests sum_i (-1)^i C(order,i) [u_(p+order-i), v_(q+i)] = 0 for |p| <= p_abs, |q| <= q_abs.
LocalityResult locality_order_check(const Model& m, const GeneratorField& u, const GeneratorField& v,
                                    int max_order, int p_abs, int q_abs);

struct AxiomReport {
  bool pass = true;
  int checks = 0;
  std::vector<std::string> failures;
  void record(bool ok, const std::string& what);
};

// Quasiprimary covariance [L_m, v_n] = (m(d-1) - n) v_{n+m} and the derivative field
// (L_{-1}v)_(m) = -m v_(m-1), exactly on the trusted window.
AxiomReport mobius_axiom_check(const Model& m, const GeneratorField& g);
// sl2 relations, vacuum invariance, grading (L_0 diagonal), generator state conditions.
AxiomReport vacuum_axiom_check(const Model& m);
// v_n vacuum = 0 for n > -d, v_{-d} vacuum = state.
AxiomReport creation_check(const Model& m, const GeneratorField& g);

struct CyclicityReport {
  bool full_rank = true;
  std::vector<int> ranks;
};
// Rank of the span of generator-mode monomials applied to the vacuum, per weight.
CyclicityReport cyclic_span_check(const Model& m);

GradedVector<RatC> apply_mode(const GeneratorField& g, int n, const GradedVector<RatC>& v);

}  // namespace mcft

#endif
