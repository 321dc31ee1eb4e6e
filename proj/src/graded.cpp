#include "mcft/graded.hpp"

#include <algorithm>

namespace mcft {

template <class S>
GradedVector<S> GradedVector<S>::basis(SpacePtr sp, int n, int i) {
  GradedVector v(std::move(sp));
  if (n < 0 || n > v.space->max_weight || i < 0 || i >= v.space->dim(n))
    throw std::out_of_range("GradedVector::basis: index out of range");
  v.at(n)[static_cast<size_t>(i)] = ScalarTraits<S>::one();
  return v;
}

template <class S>
std::vector<S>& GradedVector<S>::at(int n) {
  if (n < 0 || n > space->max_weight) throw std::out_of_range("GradedVector: weight out of range");
  auto& c = comp[static_cast<size_t>(n)];
  if (c.empty()) c.assign(static_cast<size_t>(space->dim(n)), ScalarTraits<S>::zero());
  return c;
}

template <class S>
const std::vector<S>* GradedVector<S>::find(int n) const {
  if (n < 0 || n > space->max_weight) return nullptr;
  const auto& c = comp[static_cast<size_t>(n)];
  return c.empty() ? nullptr : &c;
}

template <class S>
bool GradedVector<S>::occupied(int n) const {
  const auto* c = find(n);
  if (!c) return false;
  return std::any_of(c->begin(), c->end(), [](const S& x) { return !ScalarTraits<S>::is_zero(x); });
}

template <class S>
bool GradedVector<S>::is_zero() const {
  for (int n = 0; n <= space->max_weight; ++n)
    if (occupied(n)) return false;
  return true;
}

template <class S>
double GradedVector<S>::max_abs() const {
  double m = 0;
  for (const auto& c : comp)
    for (const auto& x : c) m = std::max(m, ScalarTraits<S>::abs_d(x));
  return m;
}

template <class S>
GradedVector<S>& GradedVector<S>::operator+=(const GradedVector& o) {
  require_same_space(space, o.space);
  for (int n = 0; n <= space->max_weight; ++n) {
    const auto* c = o.find(n);
    if (!c) continue;
    auto& mine = at(n);
    for (size_t i = 0; i < c->size(); ++i) mine[i] += (*c)[i];
  }
  tail = tail || o.tail;
  inexact = inexact || o.inexact;
  return *this;
}

template <class S>
GradedVector<S>& GradedVector<S>::operator-=(const GradedVector& o) {
  require_same_space(space, o.space);
  for (int n = 0; n <= space->max_weight; ++n) {
    const auto* c = o.find(n);
    if (!c) continue;
    auto& mine = at(n);
    for (size_t i = 0; i < c->size(); ++i) mine[i] -= (*c)[i];
  }
  tail = tail || o.tail;
  inexact = inexact || o.inexact;
  return *this;
}

template <class S>
void GradedVector<S>::scale(const S& s) {
  for (auto& c : comp)
    for (auto& x : c) x = x * s;
  if (ScalarTraits<S>::exact && ScalarTraits<S>::is_zero(s)) {
    tail = false;
    inexact = false;
  }
}

template <class S>
bool GradedVector<S>::equals_exact(const GradedVector& o) const {
  require_same_space(space, o.space);
  for (int n = 0; n <= space->max_weight; ++n) {
    const auto* a = find(n);
    const auto* b = o.find(n);
    const int d = space->dim(n);
    for (int i = 0; i < d; ++i) {
      S x = a ? (*a)[static_cast<size_t>(i)] : ScalarTraits<S>::zero();
      S y = b ? (*b)[static_cast<size_t>(i)] : ScalarTraits<S>::zero();
      if (!(x == y)) return false;
    }
  }
  return true;
}

template <class S>
GradedVector<S> project_weight(const GradedVector<S>& v, int n) {
  if (n < 0 || n > v.space->max_weight) throw std::out_of_range("project_weight: weight out of range");
  GradedVector<S> out(v.space);
  if (const auto* c = v.find(n)) out.comp[static_cast<size_t>(n)] = *c;
  out.inexact = v.inexact;
  return out;
}

template <class S>
BlockOperator<S> BlockOperator<S>::identity(SpacePtr sp) {
  BlockOperator a(std::move(sp));
  for (int n = 0; n <= a.space->max_weight; ++n)
    if (a.space->dim(n) > 0) a.rows[static_cast<size_t>(n)].push_back({n, Mat<S>::identity(a.space->dim(n))});
  return a;
}

template <class S>
const Mat<S>* BlockOperator<S>::find_block(int source, int target) const {
  if (source < 0 || source > space->max_weight) return nullptr;
  for (const auto& e : rows[static_cast<size_t>(source)])
    if (e.target == target) return &e.m;
  return nullptr;
}

template <class S>
Mat<S>& BlockOperator<S>::block(int source, int target) {
  if (source < 0 || source > space->max_weight || target < 0 || target > space->max_weight)
    throw std::out_of_range("BlockOperator::block: weight out of range");
  auto& row = rows[static_cast<size_t>(source)];
  for (auto& e : row)
    if (e.target == target) return e.m;
  row.push_back({target, Mat<S>(space->dim(target), space->dim(source))});
  std::sort(row.begin(), row.end(), [](const BlockEntry<S>& x, const BlockEntry<S>& y) { return x.target < y.target; });
  for (auto& e : row)
    if (e.target == target) return e.m;
  throw std::logic_error("BlockOperator::block: unreachable");
}

template <class S>
GradedVector<S> BlockOperator<S>::apply(const GradedVector<S>& v) const {
  require_same_space(space, v.space);
  GradedVector<S> out(space);
  bool hit_overflow = false, hit_suspect = false;
  for (int s = 0; s <= space->max_weight; ++s) {
    if (!v.occupied(s)) continue;
    if (overflow[static_cast<size_t>(s)]) hit_overflow = true;
    if (suspect[static_cast<size_t>(s)]) hit_suspect = true;
    const auto& x = *v.find(s);
    for (const auto& e : rows[static_cast<size_t>(s)]) {
      if (e.m.rows() == 0 || e.m.cols() == 0) continue;
      kernels::gemv(e.m, x, out.at(e.target));
    }
  }
  out.tail = v.tail || hit_overflow;
  out.inexact = v.inexact || v.tail || hit_suspect;
  return out;
}

template <class S>
BlockOperator<S>& BlockOperator<S>::operator+=(const BlockOperator& o) {
  require_same_space(space, o.space);
  for (int s = 0; s <= space->max_weight; ++s) {
    for (const auto& e : o.rows[static_cast<size_t>(s)]) block(s, e.target).add_in_place(e.m);
    overflow[static_cast<size_t>(s)] |= o.overflow[static_cast<size_t>(s)];
    suspect[static_cast<size_t>(s)] |= o.suspect[static_cast<size_t>(s)];
  }
  return *this;
}

template <class S>
void BlockOperator<S>::axpy(const S& s, const BlockOperator& o) {
  require_same_space(space, o.space);
  if (ScalarTraits<S>::exact && ScalarTraits<S>::is_zero(s)) return;
  for (int src = 0; src <= space->max_weight; ++src) {
    for (const auto& e : o.rows[static_cast<size_t>(src)]) block(src, e.target).axpy(s, e.m);
    overflow[static_cast<size_t>(src)] |= o.overflow[static_cast<size_t>(src)];
    suspect[static_cast<size_t>(src)] |= o.suspect[static_cast<size_t>(src)];
  }
}

template <class S>
void BlockOperator<S>::scale(const S& s) {
  if (ScalarTraits<S>::exact && ScalarTraits<S>::is_zero(s)) {
    for (auto& r : rows) r.clear();
    std::fill(overflow.begin(), overflow.end(), 0);
    std::fill(suspect.begin(), suspect.end(), 0);
    return;
  }
  for (auto& r : rows)
    for (auto& e : r) e.m.scale(s);
}

template <class S>
bool BlockOperator<S>::block_nonzero(int source, int target) const {
  const Mat<S>* m = find_block(source, target);
  return m && !m->is_zero();
}

template <class S>
double BlockOperator<S>::max_abs() const {
  double m = 0;
  for (const auto& r : rows)
    for (const auto& e : r) m = std::max(m, e.m.max_abs());
  return m;
}

template <class S>
double BlockOperator<S>::inf_norm() const {
  std::vector<std::vector<double>> row_sums(static_cast<size_t>(space->max_weight + 1));
  for (int t = 0; t <= space->max_weight; ++t) row_sums[static_cast<size_t>(t)].assign(static_cast<size_t>(space->dim(t)), 0.0);
  for (const auto& r : rows)
    for (const auto& e : r)
      for (int i = 0; i < e.m.rows(); ++i) {
        double s = 0;
        for (int j = 0; j < e.m.cols(); ++j) s += ScalarTraits<S>::abs_d(e.m(i, j));
        row_sums[static_cast<size_t>(e.target)][static_cast<size_t>(i)] += s;
      }
  double m = 0;
  for (const auto& rs : row_sums)
    for (double s : rs) m = std::max(m, s);
  return m;
}

template <class S>
std::optional<int> BlockOperator<S>::uniform_shift() const {
  std::optional<int> shift;
  for (int s = 0; s <= space->max_weight; ++s)
    for (const auto& e : rows[static_cast<size_t>(s)]) {
      if (e.m.is_zero()) continue;
      int sh = s - e.target;
      if (shift && *shift != sh) return std::nullopt;
      shift = sh;
    }
  return shift;
}

template <class S>
BlockOperator<S> compose(const BlockOperator<S>& outer, const BlockOperator<S>& inner) {
  require_same_space(outer.space, inner.space);
  BlockOperator<S> out(inner.space);
  const int n = out.space->max_weight;
  for (int s = 0; s <= n; ++s) {
    bool ovf = inner.overflow[static_cast<size_t>(s)] != 0;
    bool sus = inner.suspect[static_cast<size_t>(s)] != 0 || inner.overflow[static_cast<size_t>(s)] != 0;
    for (const auto& e1 : inner.rows[static_cast<size_t>(s)]) {
      if (e1.m.is_zero()) continue;
      const int i = e1.target;
      if (outer.overflow[static_cast<size_t>(i)]) ovf = true;
      if (outer.suspect[static_cast<size_t>(i)]) sus = true;
      for (const auto& e2 : outer.rows[static_cast<size_t>(i)]) {
        if (e2.m.is_zero()) continue;
        Mat<S> prod = kernels::gemm(e2.m, e1.m);
        out.block(s, e2.target).add_in_place(prod);
      }
    }
    out.overflow[static_cast<size_t>(s)] = ovf ? 1 : 0;
    out.suspect[static_cast<size_t>(s)] = sus ? 1 : 0;
  }
  return out;
}

template <class S>
BlockOperator<S> commutator(const BlockOperator<S>& a, const BlockOperator<S>& b) {
  BlockOperator<S> out = compose(a, b);
  BlockOperator<S> ba = compose(b, a);
  out.axpy(-ScalarTraits<S>::one(), ba);
  return out;
}

template <class S>
WindowCompare compare_on_window(const BlockOperator<S>& a, const BlockOperator<S>& b, int window,
                                int target_limit) {
  require_same_space(a.space, b.space);
  if (target_limit < 0) target_limit = window;
  WindowCompare r;
  for (int s = 0; s <= std::min(window, a.space->max_weight); ++s) {
    if (a.space->dim(s) == 0) continue;
    if (a.suspect[static_cast<size_t>(s)] || b.suspect[static_cast<size_t>(s)]) {
      ++r.skipped_sources;
      continue;
    }
    ++r.compared_sources;
    for (int t = 0; t <= std::min(target_limit, a.space->max_weight); ++t) {
      const Mat<S>* ma = a.find_block(s, t);
      const Mat<S>* mb = b.find_block(s, t);
      if (!ma && !mb) continue;
      const int rows_n = a.space->dim(t), cols_n = a.space->dim(s);
      for (int i = 0; i < rows_n; ++i)
        for (int j = 0; j < cols_n; ++j) {
          S x = ma ? (*ma)(i, j) : ScalarTraits<S>::zero();
          S y = mb ? (*mb)(i, j) : ScalarTraits<S>::zero();
          if (!(x == y)) r.equal = false;
          r.max_dev = std::max(r.max_dev, ScalarTraits<S>::abs_d(x - y));
        }
    }
  }
  return r;
}

template <class S>
WindowCompare zero_on_window(const BlockOperator<S>& a, int window, int target_limit) {
  return compare_on_window(a, BlockOperator<S>::zero(a.space), window, target_limit);
}

template <class S>
double window_deviation(const BlockOperator<S>& a, const BlockOperator<S>& b, int window,
                        int target_limit) {
  require_same_space(a.space, b.space);
  if (target_limit < 0) target_limit = window;
  double dev = 0.0;
  for (int s = 0; s <= std::min(window, a.space->max_weight); ++s) {
    if (a.space->dim(s) == 0) continue;
    for (int t = 0; t <= std::min(target_limit, a.space->max_weight); ++t) {
      const Mat<S>* ma = a.find_block(s, t);
      const Mat<S>* mb = b.find_block(s, t);
      if (!ma && !mb) continue;
      const int rows_n = a.space->dim(t), cols_n = a.space->dim(s);
      for (int i = 0; i < rows_n; ++i)
        for (int j = 0; j < cols_n; ++j) {
          S x = ma ? (*ma)(i, j) : ScalarTraits<S>::zero();
          S y = mb ? (*mb)(i, j) : ScalarTraits<S>::zero();
          dev = std::max(dev, ScalarTraits<S>::abs_d(x - y));
        }
    }
  }
  return dev;
}

template <class S>
double vector_deviation(const GradedVector<S>& a, const GradedVector<S>& b, int weight_limit) {
  require_same_space(a.space, b.space);
  if (weight_limit < 0) weight_limit = a.space->max_weight;
  double dev = 0.0;
  for (int n = 0; n <= std::min(weight_limit, a.space->max_weight); ++n) {
    const auto* ca = a.find(n);
    const auto* cb = b.find(n);
    if (!ca && !cb) continue;
    for (int i = 0; i < a.space->dim(n); ++i) {
      S x = ca ? (*ca)[static_cast<size_t>(i)] : ScalarTraits<S>::zero();
      S y = cb ? (*cb)[static_cast<size_t>(i)] : ScalarTraits<S>::zero();
      dev = std::max(dev, ScalarTraits<S>::abs_d(x - y));
    }
  }
  return dev;
}

GradedVector<Cplx> promote(const GradedVector<RatC>& v) {
  GradedVector<Cplx> out(v.space);
  for (int n = 0; n <= v.space->max_weight; ++n)
    if (const auto* c = v.find(n)) {
      auto& o = out.at(n);
      for (size_t i = 0; i < c->size(); ++i) o[i] = to_cplx((*c)[i]);
    }
  out.tail = v.tail;
  out.inexact = v.inexact;
  return out;
}

BlockOperator<Cplx> promote(const BlockOperator<RatC>& a) {
  BlockOperator<Cplx> out(a.space);
  for (int s = 0; s <= a.space->max_weight; ++s)
    for (const auto& e : a.rows[static_cast<size_t>(s)]) out.block(s, e.target) = promote(e.m);
  out.overflow = a.overflow;
  out.suspect = a.suspect;
  return out;
}

template <class S>
GradedCovector<S> GradedCovector<S>::dual_basis(SpacePtr sp, int n, int i) {
  GradedCovector c(std::move(sp));
  if (n < 0 || n > c.space->max_weight || i < 0 || i >= c.space->dim(n))
    throw std::out_of_range("GradedCovector::dual_basis: index out of range");
  c.comp[static_cast<size_t>(n)].assign(static_cast<size_t>(c.space->dim(n)), ScalarTraits<S>::zero());
  c.comp[static_cast<size_t>(n)][static_cast<size_t>(i)] = ScalarTraits<S>::one();
  return c;
}

template <class S>
typename GradedCovector<S>::Pairing GradedCovector<S>::pair(const GradedVector<S>& v) const {
  require_same_space(space, v.space);
  S acc = ScalarTraits<S>::zero();
  for (int n = 0; n <= space->max_weight; ++n) {
    const auto& row = comp[static_cast<size_t>(n)];
    if (row.empty()) continue;
    const auto* c = v.find(n);
    if (!c) continue;
    for (size_t i = 0; i < row.size(); ++i) acc += row[i] * (*c)[i];
  }
  return {acc, !v.inexact};
}

GradedCovector<Cplx> promote(const GradedCovector<RatC>& c) {
  GradedCovector<Cplx> out(c.space);
  for (size_t n = 0; n < c.comp.size(); ++n) {
    out.comp[n].resize(c.comp[n].size());
    for (size_t i = 0; i < c.comp[n].size(); ++i) out.comp[n][i] = to_cplx(c.comp[n][i]);
  }
  return out;
}

template struct GradedVector<RatC>;
template struct GradedVector<Cplx>;
template struct BlockOperator<RatC>;
template struct BlockOperator<Cplx>;
template struct GradedCovector<RatC>;
template struct GradedCovector<Cplx>;

template GradedVector<RatC> project_weight(const GradedVector<RatC>&, int);
template GradedVector<Cplx> project_weight(const GradedVector<Cplx>&, int);
template BlockOperator<RatC> compose(const BlockOperator<RatC>&, const BlockOperator<RatC>&);
template BlockOperator<Cplx> compose(const BlockOperator<Cplx>&, const BlockOperator<Cplx>&);
template BlockOperator<RatC> commutator(const BlockOperator<RatC>&, const BlockOperator<RatC>&);
template BlockOperator<Cplx> commutator(const BlockOperator<Cplx>&, const BlockOperator<Cplx>&);
template WindowCompare compare_on_window(const BlockOperator<RatC>&, const BlockOperator<RatC>&, int, int);
template WindowCompare compare_on_window(const BlockOperator<Cplx>&, const BlockOperator<Cplx>&, int, int);
template WindowCompare zero_on_window(const BlockOperator<RatC>&, int, int);
template WindowCompare zero_on_window(const BlockOperator<Cplx>&, int, int);
template double window_deviation(const BlockOperator<RatC>&, const BlockOperator<RatC>&, int, int);
template double window_deviation(const BlockOperator<Cplx>&, const BlockOperator<Cplx>&, int, int);
template double vector_deviation(const GradedVector<RatC>&, const GradedVector<RatC>&, int);
template double vector_deviation(const GradedVector<Cplx>&, const GradedVector<Cplx>&, int);

}  // namespace mcft
