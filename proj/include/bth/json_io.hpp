#ifndef BTH_JSON_IO_HPP
#define BTH_JSON_IO_HPP

#include <cstdint>
#include <string>

#include "bth/hirota.hpp"
#include "bth/lattice.hpp"
#include "bth/tau.hpp"

// vendored single-header nlohmann/json
#include "json.hpp"

namespace bth {

using Json = nlohmann::json;

Json poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const Json& j);

Json tau_to_json(const TauSequence& ts);
TauSequence tau_from_json(const Json& j);

// { "P": ..., "eps": ..., "diagonals": { "d": [values] } }
Json band_to_json(const BandOperator<double>& a);
BandOperator<double> band_from_json(const Json& j);

Json residual_report_to_json(const std::vector<ResidualReport>& reports);

// stable content hash (FNV-1a over the compact serialization)
std::string content_hash(const Json& j);

}  // namespace bth

#endif
