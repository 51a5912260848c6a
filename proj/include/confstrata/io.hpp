#pragma once

// JSON encodings of the library's inputs and outputs.

#include <string>

#include <json.hpp>

#include "confstrata/confcat.hpp"
#include "confstrata/koszul.hpp"
#include "confstrata/weightalg.hpp"
#include "confstrata/wonderful.hpp"

namespace confstrata::io {

using Json = nlohmann::json;

// Parses text; throws InputError with line and column on malformed JSON.
Json parse_json(const std::string& text, const std::string& source_name = "input");
std::string read_file(const std::string& path);

Json label_to_json(const Label& label);
Label label_from_json(const Json& j, const std::string& where);

// {"ground": [labels], "blocks": [[labels]...]}
forests::Forest forest_from_json(const Json& j);
Json forest_to_json(const forests::Forest& phi);

// {"sets": [[labels]...], "maps": [{"from": i, "assignment": {label: label}}...]}
// Returns the chain even when inconsistent; run setcat::validate_chain on it.
setcat::FinChain chain_from_json(const Json& j);
Json chain_to_json(const setcat::FinChain& chain);

// {"source": [labels], "target": [labels], "assignment": {label: label}}
setcat::SetMap set_map_from_json(const Json& j);

// {"n": n, "d": d, "members": [[labels]...]}; a member given as a list of
// lists is a polydiagonal.
wonderful::BuildingSet building_set_from_json(const Json& j);
// Schedule order: list of members in the same encoding.
std::vector<std::size_t> order_from_json(const wonderful::BuildingSet& building, const Json& j);
Json element_to_json(const wonderful::ArrangementLattice& lattice, std::size_t element);

weightalg::VarietyDescriptor variety_from_json(const Json& j);
Json weights_to_json(const weightalg::WeightMultiset& w);
Json space_to_json(const weightalg::WeightedGradedSpace& space);

// {"generators": g, "convention": "...", "relations": [[coefficients]]}
koszul::QuadraticPresentation quadratic_from_json(const Json& j);
Json quadratic_to_json(const koszul::QuadraticPresentation& p);

Json stratum_to_json(const confcat::Stratum& s);

}  // namespace confstrata::io
