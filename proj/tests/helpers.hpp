#ifndef MCFT_TESTS_HELPERS_HPP
#define MCFT_TESTS_HELPERS_HPP

#include <string>
#include <utility>
#include <vector>

#include "mcft/graded.hpp"
#include "mcft/vertex.hpp"

namespace mcft::testing {

inline RatC rc(long num, long den = 1) { return RatC(rat(num, den)); }

// Applies shifted generator modes right to left: word {(name,n1),(name,n2)} gives
// g1_{n1} g2_{n2} vac.
inline GradedVector<RatC> mode_word(const Model& m,
                                    const std::vector<std::pair<std::string, int>>& word) {
  GradedVector<RatC> v = m.vacuum;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    v = m.gen(it->first).tower.slot(it->second).apply(v);
  return v;
}

inline RatC vacuum_component(const GradedVector<RatC>& v) {
  const auto* c = v.find(0);
  return c && !c->empty() ? (*c)[0] : RatC();
}

}  // namespace mcft::testing

#endif
