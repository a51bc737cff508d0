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

#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "test_util.hpp"

using namespace dynmap;
using dynmap::testing::expect_code;
using dynmap::testing::fixture;
using io::Json;
namespace o = dynmap::oracle;

namespace {

std::string write_temp(const std::string &name, const std::string &text) {
    auto path = std::filesystem::temp_directory_path() / ("dynmap_io_" + name);
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST(spec_io, identity_fixture_matches_kraus_construction) {
    std::vector<KrausTerm> t{{1.0, CMatrix::Identity(2, 2)}};
    EXPECT_EQ(io::load_channel(fixture("identity.json")).bmat(), map_from_kraus(t, 2).bmat());
}

TEST(spec_io, every_channel_fixture_loads) {
    for (const char *name : {"identity.json", "bit_flip.json", "dephasing.json", "amplitude_damping.json",
                             "transpose.json"}) {
        DynamicalMap map = io::load_channel(fixture(name));
        EXPECT_EQ(map.dim(), 2u) << name;
        EXPECT_TRUE(check_properties(map).trace_preserving) << name;
    }
    EXPECT_FALSE(check_properties(io::load_channel(fixture("transpose.json"))).completely_positive);
}

TEST(spec_io, instrument_and_state_fixtures_load) {
    EXPECT_TRUE(io::load_instrument(fixture("basis_instrument.json")).complete());
    EXPECT_FALSE(io::load_instrument(fixture("incomplete_p0_instrument.json")).complete());
    EXPECT_LE(o::max_abs(io::load_state(fixture("plus_state.json")).matrix() - o::plus_state()), 0.0);
    EXPECT_LE(o::max_abs(io::load_state(fixture("excited_state.json")).matrix() - o::proj1()), 0.0);
    EXPECT_LE(o::max_abs(io::load_state(fixture("maximally_mixed_state.json")).matrix() - o::diag({0.5, 0.5})), 0.0);
}

TEST(spec_io, non_hermitian_dynamical_matrix_is_rejected) {
    Json doc = io::read_json_file(fixture("transpose.json"));
    doc["data"][0][1] = Json::array({0.5, 0.0});
    try {
        io::channel_document_from_json(doc);
        FAIL() << "expected ValidationError";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ValidationError);
        EXPECT_NE(std::string(e.what()).find("hermiticity"), std::string::npos) << e.what();
    }
}

TEST(spec_io, channel_round_trip_is_exact) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::size_t n = 1 + seed % 4;
        DynamicalMap map = random_cptp(n, 1 + seed % (n * n), seed);
        Json reparsed = Json::parse(io::dump(io::channel_to_json(map, "r", "round trip")));
        DynamicalMap back = io::channel_document_from_json(reparsed);
        EXPECT_LE(o::max_abs(back.bmat() - map.bmat()), 1e-15);
    }
    std::vector<CMatrix> ks = random_cptp_kraus(3, 2, 4);
    std::vector<KrausTerm> terms{{1.0, ks[0]}, {1.0, ks[1]}};
    Json kraus = Json::parse(io::dump(io::kraus_channel_to_json(3, terms)));
    EXPECT_LE(o::max_abs(io::channel_document_from_json(kraus).bmat() - map_from_kraus(terms, 3).bmat()), 1e-15);
}

TEST(spec_io, instrument_round_trip_keeps_labels_and_padding) {
    Instrument padded = pad_to_complete(io::load_instrument(fixture("incomplete_p0_instrument.json")));
    Instrument back = io::instrument_from_json(Json::parse(io::dump(io::instrument_to_json(padded))));
    ASSERT_EQ(back.size(), padded.size());
    EXPECT_EQ(back.padded_index(), padded.padded_index());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back.maps()[i].label, padded.maps()[i].label);
        EXPECT_EQ(back.maps()[i].map.bmat(), padded.maps()[i].map.bmat());
    }
}

TEST(spec_io, malformed_inputs) {
    expect_code(ErrorCode::IoError, [] { io::load_channel("/nonexistent/channel.json"); });
    expect_code(ErrorCode::ParseError, [] { io::load_channel(write_temp("bad.json", "{ not json")); });

    Json doc = io::read_json_file(fixture("identity.json"));
    Json missing = doc;
    missing.erase("dim");
    expect_code(ErrorCode::ValidationError, [&] { io::channel_document_from_json(missing); });

    Json version = doc;
    version["format_version"] = "2.0";
    expect_code(ErrorCode::ValidationError, [&] { io::channel_document_from_json(version); });

    Json wrong_shape = doc;
    wrong_shape["dim"] = 3;
    expect_code(ErrorCode::ValidationError, [&] { io::channel_document_from_json(wrong_shape); });

    Json ragged = doc;
    ragged["data"][0]["op"][1] = Json::array({Json::array({1.0, 0.0})});
    expect_code(ErrorCode::ValidationError, [&] { io::channel_document_from_json(ragged); });

    Json unknown = doc;
    unknown["representation"] = "choi";
    expect_code(ErrorCode::ValidationError, [&] { io::channel_document_from_json(unknown); });

    Json bad_weight = doc;
    bad_weight["data"][0]["weight"] = "one";
    expect_code(ErrorCode::ParseError, [&] { io::channel_document_from_json(bad_weight); });

    Json inst = io::read_json_file(fixture("basis_instrument.json"));
    inst["outcomes"][1]["label"] = "0";
    expect_code(ErrorCode::ValidationError, [&] { io::instrument_from_json(inst); });

    Json state = io::read_json_file(fixture("plus_state.json"));
    state["state"][0][0] = Json::array({0.9, 0.0});
    expect_code(ErrorCode::InvalidState, [&] { io::state_from_json(state); });
}

TEST(spec_io, digest_is_fnv1a_64) {
    EXPECT_EQ(io::digest(""), "cbf29ce484222325");
    EXPECT_EQ(io::digest("a"), "af63dc4c8601ec8c");
}

TEST(spec_io, complex_entries_are_re_im_pairs) {
    CMatrix m(1, 2);
    m << Complex(1.5, -2.0), Complex(0.0, 1e-300);
    Json j = io::matrix_to_json(m);
    EXPECT_EQ(j.dump(), "[[[1.5,-2.0],[0.0,1e-300]]]");
    EXPECT_EQ(io::matrix_from_json(j, "m"), m);
}
