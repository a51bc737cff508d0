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


#include "dynmap/commands.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "dynmap/channel.hpp"
#include "dynmap/dilation.hpp"
#include "dynmap/errors.hpp"
#include "dynmap/instrument.hpp"
#include "dynmap/spec_io.hpp"

namespace dynmap::cli {

namespace {

using io::Json;

struct Options {
    std::string input;
    std::string state;
    std::string out;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::size_t trials = 10;
    std::uint64_t shots = 1000;
    std::size_t dim = 2;
    std::size_t rank = 1;
    std::string name;
    bool with_ops = false;
    bool no_matrix = false;
    bool pad_first = false;
};

// A loaded input file together with its digest entry for the report.
struct Input {
    Json doc;
    Json record;
};

Input read_input(const std::string &path) {
    std::string bytes = io::read_file_bytes(path);
    Input in;
    try {
        in.doc = Json::parse(bytes);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
    }
    in.record = Json{{"path", path}, {"digest", io::digest(bytes)}};
    return in;
}

std::uint64_t require_seed(const Options &o) {
    if (!o.seed) {
        throw Error(ErrorCode::UsageError, "this command draws random numbers and needs --seed");
    }
    return *o.seed;
}

Json properties_json(const MapProperties &p) {
    return Json{{"hermiticity_preserving", p.hermiticity_preserving},
                {"trace_preserving", p.trace_preserving},
                {"completely_positive", p.completely_positive},
                {"min_eigenvalue", p.min_eigenvalue},
                {"trace_defect", p.trace_defect}};
}

Json decomposition_json(const DynamicalMap &map, bool with_ops) {
    CanonicalDecomposition dec = canonical_decompose(map);
    Json weights = Json::array();
    std::size_t negative = 0;
    for (const KrausTerm &t : dec.terms) {
        weights.push_back(t.weight);
        negative += t.weight < 0.0 ? 1 : 0;
    }
    DynamicalMap rebuilt = map_from_kraus(dec.terms, dec.dim);
    Json j{{"dim", dec.dim},
           {"rank", dec.rank()},
           {"rank_bound", dec.dim * dec.dim},
           {"weights", std::move(weights)},
           {"negative_weights", negative},
           {"reconstruction_error", max_abs(rebuilt.bmat() - map.bmat())}};
    if (with_ops) {
        Json ops = Json::array();
        for (const KrausTerm &t : dec.terms) {
            ops.push_back(io::matrix_to_json(t.op));
        }
        j["operators"] = std::move(ops);
    }
    return j;
}

Json sectors_json(const InstrumentDilation &dil) {
    Json sectors = Json::array();
    for (const Sector &s : dil.sectors) {
        sectors.push_back(Json{{"label", s.label}, {"begin", s.begin}, {"end", s.end}});
    }
    return sectors;
}

Instrument load_measurable(const Json &doc, bool pad_first) {
    Instrument inst = io::instrument_from_json(doc);
    return pad_first ? pad_to_complete(inst) : inst;
}

Json outcome_json(const OutcomeResult &o, const OutcomeResult &direct, bool discard) {
    return Json{{"label", o.label},
                {"probability", o.probability},
                {"probability_direct", direct.probability},
                {"discard", discard},
                {"post_state", o.post_state ? io::matrix_to_json(o.post_state->matrix()) : Json(nullptr)},
                {"raw_unnormalized", io::matrix_to_json(o.raw_unnormalized)}};
}

Json run_check(const Options &o, Json &inputs) {
    Input in = read_input(o.input);
    inputs["files"].push_back(in.record);
    double tol = o.tol.value_or(kDefaultTol);
    if (!io::is_instrument_document(in.doc)) {
        DynamicalMap map = io::channel_document_from_json(in.doc);
        return Json{{"kind", "channel"}, {"dim", map.dim()}, {"properties", properties_json(check_properties(map, tol))}};
    }
    io::InstrumentDocument doc = io::instrument_document_from_json(in.doc);
    Json outcomes = Json::array();
    CMatrix total = CMatrix::Zero(static_cast<Eigen::Index>(doc.dim), static_cast<Eigen::Index>(doc.dim));
    for (const LabeledMap &m : doc.outcomes) {
        outcomes.push_back(Json{{"label", m.label}, {"properties", properties_json(check_properties(m.map, tol))}});
        total += effect_operator(m.map);
    }
    double defect = max_abs(CMatrix::Identity(total.rows(), total.cols()) - total);
    Json j{{"kind", "instrument"},
           {"dim", doc.dim},
           {"num_outcomes", doc.outcomes.size()},
           {"complete", defect <= o.tol.value_or(kCompletenessTol)},
           {"completeness_defect", defect},
           {"ancilla_bound", doc.outcomes.size() * doc.dim * doc.dim},
           {"outcomes", std::move(outcomes)}};
    j["padded_index"] = doc.padded_index ? Json(*doc.padded_index) : Json(nullptr);
    return j;
}

Json run_decompose(const Options &o, Json &inputs) {
    Input in = read_input(o.input);
    inputs["files"].push_back(in.record);
    if (!io::is_instrument_document(in.doc)) {
        Json j = decomposition_json(io::channel_document_from_json(in.doc), o.with_ops);
        j["kind"] = "channel";
        return j;
    }
    io::InstrumentDocument doc = io::instrument_document_from_json(in.doc);
    Json outcomes = Json::array();
    for (const LabeledMap &m : doc.outcomes) {
        Json entry = decomposition_json(m.map, o.with_ops);
        entry["label"] = m.label;
        outcomes.push_back(std::move(entry));
    }
    return Json{{"kind", "instrument"}, {"dim", doc.dim}, {"outcomes", std::move(outcomes)}};
}

Json run_dilate(const Options &o, Json &inputs) {
    Input in = read_input(o.input);
    inputs["files"].push_back(in.record);
    if (!io::is_instrument_document(in.doc)) {
        DynamicalMap map = io::channel_document_from_json(in.doc);
        CanonicalDecomposition dec = canonical_decompose(map);
        CMatrix w = build_dilation_isometry(dec);
        DilationUnitary du = build_dilation_unitary(dec);
        Json j{{"kind", "channel"},
               {"sys_dim", du.sys_dim},
               {"anc_dim", du.anc_dim},
               {"ancilla_bound", du.sys_dim * du.sys_dim},
               {"isometry_residual", isometry_residual(w)},
               {"unitarity_residual", isometry_residual(du.u)}};
        if (!o.no_matrix) {
            j["unitary"] = io::matrix_to_json(du.u);
        }
        return j;
    }
    Instrument inst = load_measurable(in.doc, o.pad_first);
    InstrumentDilation dil = build_instrument_dilation(inst);
    Json j{{"kind", "instrument"},
           {"sys_dim", dil.sys_dim},
           {"anc_dim", dil.anc_dim},
           {"ancilla_bound", dil.num_maps * dil.sys_dim * dil.sys_dim},
           {"unitarity_residual", isometry_residual(dil.u)},
           {"sectors", sectors_json(dil)}};
    j["padded_index"] = dil.padded_index ? Json(*dil.padded_index) : Json(nullptr);
    if (!o.no_matrix) {
        j["unitary"] = io::matrix_to_json(dil.u);
    }
    return j;
}

Json run_verify(const Options &o, Json &inputs) {
    Input in = read_input(o.input);
    inputs["files"].push_back(in.record);
    std::uint64_t seed = require_seed(o);
    inputs["seed"] = seed;
    inputs["trials"] = o.trials;
    if (!io::is_instrument_document(in.doc)) {
        VerificationReport r = verify_dilation(io::channel_document_from_json(in.doc), o.trials, seed);
        return Json{{"kind", "channel"},
                    {"trials", r.trials},
                    {"anc_dim", r.anc_dim},
                    {"unitarity_residual", r.unitarity_residual},
                    {"max_error", r.max_error}};
    }
    Instrument inst = load_measurable(in.doc, o.pad_first);
    InstrumentDilation dil = build_instrument_dilation(inst);
    double max_prob = 0.0;
    double max_raw = 0.0;
    double max_total = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
        Rng rng = make_rng(seed, t);
        DensityMatrix rho = DensityMatrix::random(inst.dim(), rng);
        auto via = measure_via_dilation(dil, rho);
        auto direct = outcome_statistics(inst, rho);
        double total = 0.0;
        for (std::size_t i = 0; i < via.size(); ++i) {
            max_prob = std::max(max_prob, std::abs(via[i].probability - direct[i].probability));
            max_raw = std::max(max_raw, max_abs(via[i].raw_unnormalized - direct[i].raw_unnormalized));
            total += via[i].probability;
        }
        max_total = std::max(max_total, std::abs(total - 1.0));
    }
    return Json{{"kind", "instrument"},
                {"trials", o.trials},
                {"anc_dim", dil.anc_dim},
                {"unitarity_residual", isometry_residual(dil.u)},
                {"max_probability_error", max_prob},
                {"max_raw_error", max_raw},
                {"max_total_probability_error", max_total}};
}

Json run_measure(const Options &o, Json &inputs) {
    Input in = read_input(o.input);
    Input st = read_input(o.state);
    inputs["files"].push_back(in.record);
    inputs["files"].push_back(st.record);
    Instrument inst = load_measurable(in.doc, o.pad_first);
    DensityMatrix rho = io::state_from_json(st.doc);
    InstrumentDilation dil = build_instrument_dilation(inst);
    auto via = measure_via_dilation(dil, rho);
    auto direct = outcome_statistics(inst, rho);
    Json outcomes = Json::array();
    double total = 0.0;
    double deviation = 0.0;
    for (std::size_t i = 0; i < via.size(); ++i) {
        outcomes.push_back(outcome_json(via[i], direct[i], inst.padded_index() == i));
        total += via[i].probability;
        deviation = std::max(deviation, std::abs(via[i].probability - direct[i].probability));
        deviation = std::max(deviation, max_abs(via[i].raw_unnormalized - direct[i].raw_unnormalized));
    }
    return Json{{"dim", inst.dim()},
                {"anc_dim", dil.anc_dim},
                {"total_probability", total},
                {"max_deviation_from_direct", deviation},
                {"outcomes", std::move(outcomes)}};
}

Json run_sample(const Options &o, Json &inputs) {
    Input in = read_input(o.input);
    Input st = read_input(o.state);
    inputs["files"].push_back(in.record);
    inputs["files"].push_back(st.record);
    std::uint64_t seed = require_seed(o);
    inputs["seed"] = seed;
    inputs["shots"] = o.shots;
    Instrument inst = load_measurable(in.doc, o.pad_first);
    DensityMatrix rho = io::state_from_json(st.doc);
    InstrumentDilation dil = build_instrument_dilation(inst);
    auto probs = measure_via_dilation(dil, rho);
    auto hist = sample_outcomes(dil, rho, o.shots, seed);
    Json entries = Json::array();
    for (std::size_t i = 0; i < hist.size(); ++i) {
        entries.push_back(Json{{"label", hist[i].label}, {"count", hist[i].count}, {"probability", probs[i].probability}});
    }
    return Json{{"shots", o.shots}, {"anc_dim", dil.anc_dim}, {"histogram", std::move(entries)}};
}

Json run_pad(const Options &o) {
    Input in = read_input(o.input);
    return io::instrument_to_json(pad_to_complete(io::instrument_from_json(in.doc), o.tol.value_or(kDefaultTol)));
}

Json run_random(const Options &o) {
    std::uint64_t seed = require_seed(o);
    std::vector<KrausTerm> terms;
    for (CMatrix &k : random_cptp_kraus(o.dim, o.rank, seed)) {
        terms.push_back({1.0, std::move(k)});
    }
    std::string name = o.name.empty() ? "random_cptp" : o.name;
    std::string description = "seed " + std::to_string(seed) + ", Kraus rank " + std::to_string(o.rank);
    return io::kraus_channel_to_json(o.dim, terms, name, description);
}

Json error_report(const std::string &command, ErrorCode code, const std::string &message) {
    return Json{{"command", command},
                {"status", "error"},
                {"error", Json{{"code", error_name(code)}, {"message", message}}}};
}

void emit(const Json &j, const std::string &path, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << io::dump(j) << std::flush;
    } else {
        io::save_json(j, path);
    }
}

}  // namespace

int run_command(const std::vector<std::string> &args, std::ostream &out) {
    Options o;
    CLI::App app{"Dilations of dynamical maps and instruments", "dynmap"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--out", o.out, "Write the report here instead of standard output");
        sub->add_option("--tol", o.tol, "Override the default tolerance");
    };
    auto add_input = [&](CLI::App *sub, const char *what) {
        sub->add_option("input", o.input, what)->required();
    };

    CLI::App *check = app.add_subcommand("check", "Axioms of a channel, or completeness of an instrument");
    add_input(check, "Channel or instrument file");
    add_common(check);

    CLI::App *decompose = app.add_subcommand("decompose", "Canonical decomposition summary");
    add_input(decompose, "Channel or instrument file");
    decompose->add_flag("--ops", o.with_ops, "Include the eigen-operators");
    add_common(decompose);

    CLI::App *dilate = app.add_subcommand("dilate", "Build the dilation unitary");
    add_input(dilate, "Channel or instrument file");
    dilate->add_flag("--no-matrix", o.no_matrix, "Omit the unitary itself");
    dilate->add_flag("--pad", o.pad_first, "Pad an incomplete instrument first");
    add_common(dilate);

    CLI::App *verify = app.add_subcommand("verify", "Dilation route against direct application");
    add_input(verify, "Channel or instrument file");
    verify->add_option("--seed", o.seed, "Seed for the random test states")->required();
    verify->add_option("--trials", o.trials, "Number of random states")->check(CLI::PositiveNumber);
    verify->add_flag("--pad", o.pad_first, "Pad an incomplete instrument first");
    add_common(verify);

    CLI::App *measure = app.add_subcommand("measure", "Outcome table for one state");
    add_input(measure, "Instrument file");
    measure->add_option("--state", o.state, "State file")->required();
    measure->add_flag("--pad", o.pad_first, "Pad an incomplete instrument first");
    add_common(measure);

    CLI::App *sample = app.add_subcommand("sample", "Monte Carlo outcome histogram");
    add_input(sample, "Instrument file");
    sample->add_option("--state", o.state, "State file")->required();
    sample->add_option("--shots", o.shots, "Number of shots")->check(CLI::PositiveNumber);
    sample->add_option("--seed", o.seed, "Sampler seed")->required();
    sample->add_flag("--pad", o.pad_first, "Pad an incomplete instrument first");
    add_common(sample);

    CLI::App *pad = app.add_subcommand("pad", "Emit the instrument completed with a discard outcome");
    add_input(pad, "Instrument file");
    add_common(pad);

    CLI::App *random = app.add_subcommand("random", "Emit a seeded random CPTP channel in Kraus form");
    random->add_option("--dim", o.dim, "System dimension")->check(CLI::PositiveNumber);
    random->add_option("--rank", o.rank, "Kraus rank, 1..dim^2");
    random->add_option("--seed", o.seed, "Generator seed")->required();
    random->add_option("--name", o.name, "Name stored in the file");
    add_common(random);

    std::vector<const char *> argv{"dynmap"};
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        std::string command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
        emit(error_report(command, ErrorCode::UsageError, e.what()), "", out);
        return kExitUsage;
    }

    CLI::App *sub = app.get_subcommands().front();
    std::string command = sub->get_name();
    try {
        Json inputs{{"files", Json::array()}};
        if (o.tol) {
            inputs["tol"] = *o.tol;
        }
        Json results;
        if (sub == pad) {
            emit(run_pad(o), o.out, out);
            return kExitOk;
        }
        if (sub == random) {
            emit(run_random(o), o.out, out);
            return kExitOk;
        }
        if (sub == check) {
            results = run_check(o, inputs);
        } else if (sub == decompose) {
            results = run_decompose(o, inputs);
        } else if (sub == dilate) {
            results = run_dilate(o, inputs);
        } else if (sub == verify) {
            results = run_verify(o, inputs);
        } else if (sub == measure) {
            results = run_measure(o, inputs);
        } else {
            results = run_sample(o, inputs);
        }
        Json report{{"command", command}, {"status", "ok"}, {"inputs", std::move(inputs)}, {"results", std::move(results)}};
        emit(report, o.out, out);
        return kExitOk;
    } catch (const Error &e) {
        Json report = error_report(command, e.code(), e.what());
        try {
            emit(report, o.out, out);
        } catch (const Error &) {
            emit(report, "", out);
        }
        return e.code() == ErrorCode::UsageError ? kExitUsage : kExitError;
    }
}

}  // namespace dynmap::cli
