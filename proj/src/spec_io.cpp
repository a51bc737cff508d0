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


#include "dynmap/spec_io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dynmap/errors.hpp"

namespace dynmap::io {

namespace {

Eigen::Index idx(std::size_t i) {
    return static_cast<Eigen::Index>(i);
}

[[noreturn]] void invalid(const std::string &what) {
    throw Error(ErrorCode::ValidationError, what);
}

const Json &field(const Json &obj, const char *key, std::string_view where) {
    if (!obj.is_object()) {
        invalid(std::string(where) + ": expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        invalid(std::string(where) + ": missing field '" + key + "'");
    }
    return *it;
}

std::size_t read_dim(const Json &doc) {
    const Json &d = field(doc, "dim", "document");
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
        invalid("document: 'dim' must be a positive integer");
    }
    return d.get<std::size_t>();
}

void check_version(const Json &doc) {
    const Json &v = field(doc, "format_version", "document");
    if (!v.is_string()) {
        invalid("document: 'format_version' must be a string");
    }
    std::string version = v.get<std::string>();
    if (version.substr(0, version.find('.')) != kFormatVersion.substr(0, kFormatVersion.find('.'))) {
        invalid("unsupported format_version '" + version + "', expected " + std::string(kFormatVersion));
    }
}

void require_shape(const CMatrix &m, std::size_t rows, std::size_t cols, std::string_view where) {
    if (m.rows() != idx(rows) || m.cols() != idx(cols)) {
        invalid(std::string(where) + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                " matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

template <typename Fn>
auto translate_json_errors(Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

void put_metadata(Json &doc, std::string_view name, std::string_view description) {
    if (!name.empty()) {
        doc["name"] = name;
    }
    if (!description.empty()) {
        doc["description"] = description;
    }
}

}  // namespace

Json matrix_to_json(const CMatrix &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json &j, std::string_view where) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        invalid(std::string(where) + ": matrix must be a non-empty array of rows");
    }
    std::size_t rows = j.size();
    std::size_t cols = j.front().size();
    CMatrix m(idx(rows), idx(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const Json &row = j[r];
        if (!row.is_array() || row.size() != cols) {
            invalid(std::string(where) + ": ragged matrix row " + std::to_string(r));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const Json &z = row[c];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                invalid(std::string(where) + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") must be [re, im]");
            }
            m(idx(r), idx(c)) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    if (!m.allFinite()) {
        invalid(std::string(where) + ": non-finite entry");
    }
    return m;
}

DynamicalMap channel_from_json(const Json &payload, std::size_t dim) {
    return translate_json_errors([&] {
        const Json &rep = field(payload, "representation", "channel");
        const Json &data = field(payload, "data", "channel");
        std::string kind = rep.is_string() ? rep.get<std::string>() : std::string();
        if (kind == "kraus") {
            if (!data.is_array()) {
                invalid("channel: kraus data must be an array of {weight, op}");
            }
            std::vector<KrausTerm> terms;
            for (std::size_t k = 0; k < data.size(); ++k) {
                std::string where = "kraus operator " + std::to_string(k);
                KrausTerm t;
                t.weight = data[k].is_object() && data[k].contains("weight") ? data[k]["weight"].get<double>() : 1.0;
                t.op = matrix_from_json(field(data[k], "op", where), where);
                require_shape(t.op, dim, dim, where);
                terms.push_back(std::move(t));
            }
            return map_from_kraus(terms, dim);
        }
        if (kind == "dynamical_matrix") {
            CMatrix b = matrix_from_json(data, "dynamical matrix");
            require_shape(b, dim * dim, dim * dim, "dynamical matrix");
            double residual = hermiticity_residual(b);
            if (residual > kLoadHermiticityTol) {
                invalid("dynamical matrix violates hermiticity bmat((r,r'),(s,s')) = conj(bmat((s,s'),(r,r'))): "
                        "residual " +
                        std::to_string(residual));
            }
            return DynamicalMap(dim, std::move(b), kLoadHermiticityTol);
        }
        invalid("channel: representation must be 'kraus' or 'dynamical_matrix'");
    });
}

DynamicalMap channel_document_from_json(const Json &doc) {
    return translate_json_errors([&] {
        check_version(doc);
        return channel_from_json(doc, read_dim(doc));
    });
}

Json channel_to_json(const DynamicalMap &map, std::string_view name, std::string_view description) {
    Json doc;
    doc["format_version"] = kFormatVersion;
    doc["dim"] = map.dim();
    put_metadata(doc, name, description);
    doc["representation"] = "dynamical_matrix";
    doc["data"] = matrix_to_json(map.bmat());
    return doc;
}

Json kraus_channel_to_json(std::size_t dim, std::span<const KrausTerm> terms, std::string_view name,
                           std::string_view description) {
    Json doc;
    doc["format_version"] = kFormatVersion;
    doc["dim"] = dim;
    put_metadata(doc, name, description);
    doc["representation"] = "kraus";
    Json data = Json::array();
    for (const KrausTerm &t : terms) {
        data.push_back(Json{{"weight", t.weight}, {"op", matrix_to_json(t.op)}});
    }
    doc["data"] = std::move(data);
    return doc;
}

bool is_instrument_document(const Json &doc) {
    return doc.is_object() && doc.contains("outcomes");
}

InstrumentDocument instrument_document_from_json(const Json &doc) {
    return translate_json_errors([&] {
        check_version(doc);
        InstrumentDocument out;
        out.dim = read_dim(doc);
        const Json &outcomes = field(doc, "outcomes", "instrument");
        if (!outcomes.is_array() || outcomes.empty()) {
            invalid("instrument: 'outcomes' must be a non-empty array");
        }
        for (const Json &o : outcomes) {
            const Json &label = field(o, "label", "outcome");
            if (!label.is_string()) {
                invalid("outcome: 'label' must be a string");
            }
            std::string name = label.get<std::string>();
            for (const LabeledMap &seen : out.outcomes) {
                if (seen.label == name) {
                    invalid("instrument: duplicate outcome label '" + name + "'");
                }
            }
            out.outcomes.push_back({name, channel_from_json(o, out.dim)});
        }
        if (doc.contains("padded_index") && !doc["padded_index"].is_null()) {
            out.padded_index = doc["padded_index"].get<std::size_t>();
        }
        return out;
    });
}

Instrument instrument_from_json(const Json &doc) {
    InstrumentDocument parsed = instrument_document_from_json(doc);
    return Instrument(std::move(parsed.outcomes), parsed.padded_index);
}

Json instrument_to_json(const Instrument &inst) {
    Json doc;
    doc["format_version"] = kFormatVersion;
    doc["dim"] = inst.dim();
    if (inst.padded_index()) {
        doc["padded_index"] = *inst.padded_index();
    }
    Json outcomes = Json::array();
    for (const LabeledMap &m : inst.maps()) {
        outcomes.push_back(Json{{"label", m.label},
                                {"representation", "dynamical_matrix"},
                                {"data", matrix_to_json(m.map.bmat())}});
    }
    doc["outcomes"] = std::move(outcomes);
    return doc;
}

DensityMatrix state_from_json(const Json &doc) {
    return translate_json_errors([&] {
        check_version(doc);
        std::size_t dim = read_dim(doc);
        CMatrix m = matrix_from_json(field(doc, "state", "state"), "state");
        require_shape(m, dim, dim, "state");
        return DensityMatrix(std::move(m), kLoadHermiticityTol);
    });
}

Json state_to_json(const DensityMatrix &rho) {
    Json doc;
    doc["format_version"] = kFormatVersion;
    doc["dim"] = rho.dim();
    doc["state"] = matrix_to_json(rho.matrix());
    return doc;
}

std::string read_file_bytes(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json read_json_file(const std::string &path) {
    std::string bytes = read_file_bytes(path);
    try {
        return Json::parse(bytes);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
    }
}

DynamicalMap load_channel(const std::string &path) {
    return channel_document_from_json(read_json_file(path));
}

Instrument load_instrument(const std::string &path) {
    return instrument_from_json(read_json_file(path));
}

DensityMatrix load_state(const std::string &path) {
    return state_from_json(read_json_file(path));
}

std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

void save_json(const Json &j, const std::string &path) {
    std::string text = dump(j);
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    }
}

std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dynmap::io
