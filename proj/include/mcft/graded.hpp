#ifndef MCFT_GRADED_HPP
#define MCFT_GRADED_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcft/kernels.hpp"
#include "mcft/mat.hpp"

namespace mcft {

// Finite-dimensional N-graded coefficient space, weights 0..max_weight.
struct GradedSpace {
  int max_weight = 0;
  std::vector<int> dims;                        // size max_weight + 1
  std::vector<std::vector<std::string>> labels; // basis labels per weight (may be empty)

  int dim(int n) const { return (n >= 0 && n <= max_weight) ? dims[static_cast<size_t>(n)] : 0; }
  int total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
  friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
    return a.max_weight == b.max_weight && a.dims == b.dims;
  }
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

inline void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a.get() == b.get()) return;
  if (!a || !b || !(*a == *b)) throw std::logic_error("graded: space mismatch");
}

// Truncation bookkeeping:
//   tail    - the untruncated object continues above max_weight (those components were dropped)
//   inexact - stored components may be wrong because a previously dropped tail could feed back down
template <class S>
struct GradedVector {
  SpacePtr space;
  std::vector<std::vector<S>> comp;  // comp[n] is empty (meaning zero) or has size dims[n]
  bool tail = false;
  bool inexact = false;

  GradedVector() = default;
  explicit GradedVector(SpacePtr sp) : space(std::move(sp)), comp(static_cast<size_t>(space->max_weight + 1)) {}

  static GradedVector zero(SpacePtr sp) { return GradedVector(std::move(sp)); }
  static GradedVector basis(SpacePtr sp, int n, int i);

  std::vector<S>& at(int n);
  const std::vector<S>* find(int n) const;

  bool occupied(int n) const;
  bool is_zero() const;
  double max_abs() const;

  GradedVector& operator+=(const GradedVector& o);
  GradedVector& operator-=(const GradedVector& o);
  void scale(const S& s);
  friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
  friend GradedVector operator-(GradedVector a, const GradedVector& b) { return a -= b; }

  bool equals_exact(const GradedVector& o) const;  // compares stored components only
};

template <class S>
GradedVector<S> project_weight(const GradedVector<S>& v, int n);

template <class S>
struct BlockEntry {
  int target;
  Mat<S> m;
};

// Weight-block operator. rows[s] holds the blocks V(s) -> V(target); per-source flags:
//   overflow[s] - the true operator maps V(s) above max_weight (those blocks were dropped)
//   suspect[s]  - stored blocks from source s may be wrong (a composition lost an intermediate)
template <class S>
struct BlockOperator {
  SpacePtr space;
  std::vector<std::vector<BlockEntry<S>>> rows;
  std::vector<char> overflow;
  std::vector<char> suspect;

  BlockOperator() = default;
  explicit BlockOperator(SpacePtr sp)
      : space(std::move(sp)),
        rows(static_cast<size_t>(space->max_weight + 1)),
        overflow(static_cast<size_t>(space->max_weight + 1), 0),
        suspect(static_cast<size_t>(space->max_weight + 1), 0) {}

  static BlockOperator zero(SpacePtr sp) { return BlockOperator(std::move(sp)); }
  static BlockOperator identity(SpacePtr sp);

  const Mat<S>* find_block(int source, int target) const;
  Mat<S>& block(int source, int target);  // creates a zero block if absent

  GradedVector<S> apply(const GradedVector<S>& v) const;

  BlockOperator& operator+=(const BlockOperator& o);
  void axpy(const S& s, const BlockOperator& o);
  void scale(const S& s);

  bool block_nonzero(int source, int target) const;
  double max_abs() const;
  double inf_norm() const;
  std::optional<int> uniform_shift() const;  // s - t common to all nonzero blocks

  int max_weight() const { return space->max_weight; }
};

// outer . inner, with conservative flag propagation
template <class S>
BlockOperator<S> compose(const BlockOperator<S>& outer, const BlockOperator<S>& inner);

template <class S>
BlockOperator<S> commutator(const BlockOperator<S>& a, const BlockOperator<S>& b);

struct WindowCompare {
  bool equal = true;          // exact equality of compared blocks
  double max_dev = 0.0;       // max absolute entry deviation over compared blocks
  int compared_sources = 0;
  int skipped_sources = 0;    // sources inside the window skipped as suspect
};

// Compares blocks from sources <= window that are trusted on both sides; targets above
// target_limit (default: window) are ignored.
template <class S>
WindowCompare compare_on_window(const BlockOperator<S>& a, const BlockOperator<S>& b, int window,
                                int target_limit = -1);

template <class S>
WindowCompare zero_on_window(const BlockOperator<S>& a, int window, int target_limit = -1);

// Max entry deviation over sources and targets within the limits, ignoring trust
// flags; the float-tolerance counterpart of compare_on_window.
template <class S>
double window_deviation(const BlockOperator<S>& a, const BlockOperator<S>& b, int window,
                        int target_limit = -1);

template <class S>
double vector_deviation(const GradedVector<S>& a, const GradedVector<S>& b, int weight_limit = -1);

GradedVector<Cplx> promote(const GradedVector<RatC>& v);
BlockOperator<Cplx> promote(const BlockOperator<RatC>& a);

// Finitely supported functional on the graded space (plain coordinate pairing).
template <class S>
struct GradedCovector {
  SpacePtr space;
  std::vector<std::vector<S>> comp;

  explicit GradedCovector(SpacePtr sp) : space(std::move(sp)), comp(static_cast<size_t>(space->max_weight + 1)) {}
  static GradedCovector dual_basis(SpacePtr sp, int n, int i);

  struct Pairing {
    S value;
    bool conclusive;
  };
  Pairing pair(const GradedVector<S>& v) const;
};

GradedCovector<Cplx> promote(const GradedCovector<RatC>& c);

extern template struct GradedVector<RatC>;
extern template struct GradedVector<Cplx>;
extern template struct BlockOperator<RatC>;
extern template struct BlockOperator<Cplx>;

}  // namespace mcft

#endif
