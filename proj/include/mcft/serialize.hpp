#ifndef MCFT_SERIALIZE_HPP
#define MCFT_SERIALIZE_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "mcft/circle.hpp"
#include "mcft/forms.hpp"
#include "mcft/graded.hpp"
#include "mcft/vertex.hpp"

namespace mcft {

// Insertion-ordered so emitted reports read in the order they were assembled and
// byte-identical runs stay byte-identical.
using Json = nlohmann::ordered_json;

// {"band": M, "coeffs": [[n, re, im], ...]} sorted by n; zero coefficients omitted.
Json to_json(const TestFunction& f);
TestFunction test_function_from_json(const Json& j);

// Exact scalars as numerator/denominator strings: {"re": "p/q", "im": "p/q"}.
Json to_json(const RatC& x);
RatC ratc_from_json(const Json& j);

Json to_json(const Mat<RatC>& m);
Mat<RatC> mat_from_json(const Json& j);

// Explicit block list plus the per-source flag arrays.
Json to_json(const BlockOperator<RatC>& a);
BlockOperator<RatC> operator_from_json(const Json& j, const SpacePtr& space);

Json to_json(const GradedVector<RatC>& v);
GradedVector<RatC> vector_from_json(const Json& j, const SpacePtr& space);

// Dims and generator descriptors; with_matrices adds vacuum, sl2 blocks, generator
// states and full mode towers in exact form.
Json model_to_json(const Model& m, bool with_matrices = false);

// Per-weight exact Gram entries.
Json gram_to_json(const GramTower& g);
Json unitarity_to_json(const UnitarityReport& r);

// One-line descriptor used in CSV rows: "e_n" for a unit Fourier mode, otherwise the
// band and nonzero-coefficient count.
std::string describe(const TestFunction& f);

struct CorrelatorRow {
  int k = 0;
  std::string fields;     // insertion names, ';'-joined, outermost first
  std::string functions;  // matching test-function descriptors
  Cplx value{0, 0};
};

// Header "k,fields,functions,re,im" plus one row per correlator.
std::string correlator_csv(const std::vector<CorrelatorRow>& rows);

std::string json_to_string(const Json& j);
Json json_from_string(const std::string& text);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mcft

#endif
