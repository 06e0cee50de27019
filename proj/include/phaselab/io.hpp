#pragma once

// JSON documents: complex scalars as [re, im], matrices as row-major nested
// arrays, loops as {n, samples}, sheets as {n, rows}, covers as
// {charts, overlaps: {"i,j": [...]}, triples: {"i,j,k": [...]}}.

#include <json.hpp>
#include <string>

#include "phaselab/cech.hpp"
#include "phaselab/homotopy.hpp"

namespace phaselab::io {

using nlohmann::json;

json to_json(const cplx& z);
json to_json(const ComplexMatrix& m);
json to_json(const ComplexVector& v);
json to_json(const StateLoop& loop);
json to_json(const HomotopySheet& sheet);
json to_json(const SampledCover& cover);
/// {charts, values: {"i,j": [[re, im], ...]}} aligned with the cover's overlap samples.
json to_json(const U1Cochain1& c, const SampledCover& cover);

/// `where` prefixes error messages.
cplx complex_from_json(const json& j, const std::string& where);
ComplexMatrix matrix_from_json(const json& j, const std::string& where);
SampledCover cover_from_json(const json& j);
U1Cochain1 u1_cochain_from_json(const json& j, const SampledCover& cover);
HomotopySheet sheet_from_json(const json& j);

/**
 *  Parses and validates a loop document. Errors carry the source name and
 *  the line of the offending token or sample.
 */
StateLoop loop_from_text(const std::string& text, const std::string& source = "<input>");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace phaselab::io
