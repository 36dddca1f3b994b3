#pragma once

// JSON interchange for every domain type. Writers are deterministic
// (graded-lex term order, canonical scalars); readers accept terms in any
// order and also take plain integers or "p/q" strings as rational scalars.

#include "ballsym/autgroup.hpp"
#include "ballsym/hermitian.hpp"
#include "ballsym/invariance.hpp"
#include "ballsym/polymap.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace ballsym::io {

using Json = nlohmann::ordered_json;

Json to_json(const RadScalar& s);
RadScalar scalar_from_json(const Json& j);

Json to_json(const FloatComplex& x);
FloatComplex float_from_json(const Json& j);

Json to_json(const MultiIndex& a);
MultiIndex multi_index_from_json(const Json& j, std::size_t n);

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j, std::size_t n);

Json to_json(const PolyMap& f);
Json to_json(const RationalMap& f);
/// Throws ParseError when a denominator is present.
PolyMap polymap_from_json(const Json& j);
RationalMap rational_map_from_json(const Json& j);

Json to_json(const RadMatrix& m);
RadMatrix matrix_from_json(const Json& j);
Json to_json(const FloatMatrix& m);

Json to_json(const BallAutomorphism& g);
BallAutomorphism automorphism_from_json(const Json& j);
Json to_json(const FloatAutomorphism& g);

/// {"dim", "generators"}; the element list is not stored.
Json group_to_json(const FiniteUnitaryGroup& g);
/// Generators only; run group_closure to obtain elements.
FiniteUnitaryGroup group_generators_from_json(const Json& j);

Json to_json(const PolarizedForm& p);
Json to_json(const HermitianPoly& h);
HermitianPoly hermitian_from_json(const Json& j);

Json to_json(const TorusSubgroup& t);
TorusSubgroup torus_from_json(const Json& j);

Json to_json(const KernelClass& k);
Json to_json(const SpanReport& s);
Json to_json(const PropernessReport& r);
Json to_json(const HfReport& h);
Json to_json(const PhiResult& r);
Json to_json(const GradedReport& g);
Json to_json(const MonomialSolveResult& r);

std::string library_version();

Json load_file(const std::string& path);
void save_file(const std::string& path, const Json& j);
/// Two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace ballsym::io
