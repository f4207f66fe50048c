#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapcert/gap_bounds.hpp"
#include "gapcert/model.hpp"
#include "gapcert/stokes.hpp"

namespace gapcert {

/// Sections "A", "B", "C", each followed by a matrix in the text format.
/// "C" may be written as "C zero k" or omitted (then k = cols(B)).
BlockSaddle read_block_saddle(std::istream& in);
BlockSaddle parse_block_saddle(const std::string& text);
BlockSaddle load_block_saddle(const std::string& path);

/// %.17g; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

nlohmann::ordered_json to_json(const GapCertificate& g);
nlohmann::ordered_json to_json(const IntervalPair& p);
nlohmann::ordered_json to_json(const SecularRoots& r);
nlohmann::ordered_json to_json(const SpuriousEstimate& e);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace gapcert
