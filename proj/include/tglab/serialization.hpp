#pragma once

// JSON forms of the domain types. Every to_json output re-parses through the
// matching from_json into an equal value.
//
//   TestFunction  {L, N, entries: [{n: [i, j, k], re: [..], im: [..]}], mean: [..]}
//                 Only one of each (k, -k) pair need be listed; the other is
//                 completed by conjugation. Scalars use one-element arrays
//                 (plain numbers are accepted on input).
//   WeylElement   {f, g, phase: [re, im]}

#include "tglab/euclidean.hpp"
#include "tglab/series.hpp"
#include "tglab/spectral.hpp"
#include "tglab/states.hpp"
#include "tglab/weyl_algebra.hpp"

#include <json.hpp>

namespace tglab {

using Json = nlohmann::json;

/// Raised for structurally invalid JSON input.
class JsonFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json complex_to_json(Complex c);
Complex complex_from_json(const Json& j);

Json to_json(const VectorFunction& f);
Json to_json(const ScalarFunction& f);
/// A grid is created from L and N unless `grid` is given, in which case L
/// and N must match it.
VectorFunction vector_function_from_json(const Json& j, const GridPtr& grid = nullptr);
ScalarFunction scalar_function_from_json(const Json& j, const GridPtr& grid = nullptr);

Json to_json(const WeylElement& w);
WeylElement weyl_from_json(const Json& j, const GridPtr& grid = nullptr);

Json to_json(const QuasiPolynomialSeries& s);
QuasiPolynomialSeries series_from_json(const Json& j);

Json to_json(const SampledSeries& s);
SampledSeries sampled_series_from_json(const Json& j);

Json to_json(const SupportPoint& p);
Json to_json(const SpectralVerdict& v);
SpectralVerdict verdict_from_json(const Json& j);

/// {rho: [[m2, w], ...], Z}
Json to_json(const SpectralMeasure& m);
SpectralMeasure measure_from_json(const Json& j);

Json to_json(const McEstimate& e);

}  // namespace tglab
