// Copyright 2026 The dynmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef DYNMAP_SPEC_IO_HPP
#define DYNMAP_SPEC_IO_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dynmap/channel.hpp"
#include "dynmap/instrument.hpp"

// JSON file formats for channels, instruments and states.
//
// Matrices are arrays of rows; each entry is a two-element [re, im] array.
//
//   channel:    {"format_version": "1.0", "dim": N, "representation": "kraus",
//                "name": ..., "description": ...,
//                "data": [{"weight": w, "op": <N×N>}, ...]}
//               or "representation": "dynamical_matrix" with "data": <N²×N²>
//   instrument: {"format_version": "1.0", "dim": N, "padded_index": k (optional),
//                "outcomes": [{"label": ..., "representation": ..., "data": ...}, ...]}
//   state:      {"format_version": "1.0", "dim": N, "state": <N×N>}

namespace dynmap::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "1.0";
/// Hermiticity tolerance applied to dynamical matrices read from files.
inline constexpr double kLoadHermiticityTol = 1e-8;

Json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j, std::string_view where);

/// Parses a channel payload (`representation` + `data`). `dim` comes from the
/// enclosing document.
DynamicalMap channel_from_json(const Json &payload, std::size_t dim);
DynamicalMap channel_document_from_json(const Json &doc);

Json channel_to_json(const DynamicalMap &map, std::string_view name = {}, std::string_view description = {});
Json kraus_channel_to_json(std::size_t dim, std::span<const KrausTerm> terms, std::string_view name = {},
                           std::string_view description = {});

/// Outcome list and padding marker exactly as written, before any instrument-level
/// validation, so callers can report on members that would be rejected.
struct InstrumentDocument {
    std::size_t dim = 0;
    std::vector<LabeledMap> outcomes;
    std::optional<std::size_t> padded_index;
};

InstrumentDocument instrument_document_from_json(const Json &doc);
Instrument instrument_from_json(const Json &doc);
Json instrument_to_json(const Instrument &inst);

DensityMatrix state_from_json(const Json &doc);
Json state_to_json(const DensityMatrix &rho);

/// True for documents carrying an "outcomes" array.
bool is_instrument_document(const Json &doc);

/// Reads and parses a file. Throws IoError if it cannot be read, ParseError on bad JSON.
Json read_json_file(const std::string &path);
/// Raw bytes of a file; IoError on failure.
std::string read_file_bytes(const std::string &path);

DynamicalMap load_channel(const std::string &path);
Instrument load_instrument(const std::string &path);
DensityMatrix load_state(const std::string &path);

/// Two-space indented dump with a trailing newline. Doubles print in shortest
/// round-trip form.
std::string dump(const Json &j);
/// Writes dump(j) to `path`, or to standard output for "-" or an empty path.
void save_json(const Json &j, const std::string &path);

/// FNV-1a 64-bit digest as 16 lowercase hex digits.
std::string digest(std::string_view bytes);

}  // namespace dynmap::io

#endif
