#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "limitset/cone.hpp"
#include "limitset/criteria3.hpp"
#include "limitset/growth.hpp"
#include "limitset/spectral.hpp"
#include "limitset/words.hpp"

namespace limitset {

using Json = nlohmann::ordered_json;

// Generator file: {"n": 3, "generators": [{"name": "a", "rows": [["1","1","2"], ...]}, ...]}.
// Entries are decimal or p/q strings (integers also accepted). Throws ParseError
// on malformed input, DimensionError / DomainError from GeneratorSet.
GeneratorSet parse_generators(const Json& j);
GeneratorSet parse_generators_text(const std::string& text);
GeneratorSet load_generators(const std::string& path);
Json generators_json(const GeneratorSet& gens);

Json to_json(const RationalMatrix& m);
Json to_json(const AVector& v);
Json to_json(const Flag& f);
Json to_json(const SpectralClass& c);
Json to_json(const EnumerationResult& e, const GeneratorSet& gens, bool list_elements);
Json to_json(const ConeEstimate& c, const GeneratorSet& gens);
Json to_json(const BoundaryVerdict& b);
Json to_json(const RatioReport& r, const GeneratorSet& gens);
Json to_json(const ThmA1Result& r, const GeneratorSet& seed);
Json to_json(const ZariskiReport& z, const GeneratorSet& gens);
Json to_json(const CriteriaReport& r, const GeneratorSet& gens);
Json to_json(const PingPongCertificate& c);
Json to_json(const ExponentEstimate& e);
Json to_json(const AnosovReport& a);
Json to_json(const KeyLemmaReport& k);

// One row per (root, grid point): root,R,count,slope,residual.
std::string exponent_csv(const ExponentEstimate& e);

// Non-finite doubles become null.
Json number(double x);

}  // namespace limitset
