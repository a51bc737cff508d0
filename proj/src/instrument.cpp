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


#include "dynmap/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "dynmap/errors.hpp"
#include "dynmap/random.hpp"

namespace dynmap {

namespace {

Eigen::Index idx(std::size_t i) {
    return static_cast<Eigen::Index>(i);
}

CMatrix identity(std::size_t n) {
    return CMatrix::Identity(idx(n), idx(n));
}

OutcomeResult make_outcome(std::string label, CMatrix raw, double threshold) {
    OutcomeResult out;
    out.label = std::move(label);
    out.probability = raw.trace().real();
    if (out.probability > threshold) {
        CMatrix post = 0.5 * (raw + raw.adjoint()) / out.probability;
        out.post_state = DensityMatrix::assume_valid(std::move(post));
    }
    out.raw_unnormalized = std::move(raw);
    return out;
}

std::string unique_label(const std::vector<LabeledMap> &maps, const std::string &base) {
    auto taken = [&](const std::string &l) {
        return std::any_of(maps.begin(), maps.end(), [&](const LabeledMap &m) { return m.label == l; });
    };
    std::string label = base;
    for (int k = 1; taken(label); ++k) {
        label = base + "_" + std::to_string(k);
    }
    return label;
}

}  // namespace

Instrument::Instrument(std::vector<LabeledMap> maps, std::optional<std::size_t> padded_index)
    : maps_(std::move(maps)), padded_index_(padded_index) {
    if (maps_.empty()) {
        throw Error(ErrorCode::ValidationError, "instrument needs at least one outcome");
    }
    dim_ = maps_.front().map.dim();
    std::set<std::string> labels;
    for (const LabeledMap &m : maps_) {
        if (m.map.dim() != dim_) {
            throw Error(ErrorCode::DimensionMismatch, "outcome '" + m.label + "' acts on a different dimension");
        }
        if (m.label.empty() || !labels.insert(m.label).second) {
            throw Error(ErrorCode::ValidationError, "outcome labels must be non-empty and unique: '" + m.label + "'");
        }
        MapProperties props = check_properties(m.map);
        if (!props.completely_positive) {
            throw Error(ErrorCode::NotCompletelyPositive,
                        "outcome '" + m.label + "' has dynamical-matrix eigenvalue " +
                            std::to_string(props.min_eigenvalue));
        }
    }
    if (padded_index_ && *padded_index_ >= maps_.size()) {
        throw Error(ErrorCode::ValidationError, "padded index out of range");
    }
    complete_ = check_completeness(*this).complete;
}

Completeness check_completeness(const Instrument &inst, double tol) {
    CMatrix total = CMatrix::Zero(idx(inst.dim()), idx(inst.dim()));
    for (const LabeledMap &m : inst.maps()) {
        total += effect_operator(m.map);
    }
    Completeness c;
    c.defect = identity(inst.dim()) - total;
    c.complete = max_abs(c.defect) <= tol;
    return c;
}

Instrument pad_to_complete(const Instrument &inst, double tol) {
    Completeness c = check_completeness(inst, tol);
    if (c.complete) {
        return inst;
    }
    CMatrix defect = 0.5 * (c.defect + c.defect.adjoint());
    double min_eig = hermitian_eig(defect).values.minCoeff();
    if (min_eig < -kOverCompleteTol) {
        throw Error(ErrorCode::OverComplete,
                    "outcome probabilities can exceed 1: I - sum E has eigenvalue " + std::to_string(min_eig));
    }
    CMatrix kraus = psd_sqrt(defect, kOverCompleteTol);
    std::vector<LabeledMap> maps = inst.maps();
    std::size_t padded = maps.size();
    std::string label = unique_label(maps, "discard");
    KrausTerm term{1.0, std::move(kraus)};
    maps.push_back({std::move(label), map_from_kraus(std::span<const KrausTerm>(&term, 1), inst.dim())});
    return Instrument(std::move(maps), padded);
}

InstrumentDilation build_instrument_dilation(const Instrument &inst, Completion completion) {
    Completeness c = check_completeness(inst);
    if (!c.complete) {
        throw Error(ErrorCode::Incomplete,
                    "max |I - sum E| = " + std::to_string(max_abs(c.defect)) + "; pad the instrument first");
    }
    std::size_t n = inst.dim();
    InstrumentDilation dil;
    dil.sys_dim = n;
    dil.num_maps = inst.size();
    dil.padded_index = inst.padded_index();

    std::vector<CanonicalDecomposition> decs;
    decs.reserve(inst.size());
    for (const LabeledMap &m : inst.maps()) {
        CanonicalDecomposition dec = canonical_decompose(m.map);
        for (const KrausTerm &t : dec.terms) {
            if (t.weight < -kWeightClampTol) {
                throw Error(ErrorCode::NotCompletelyPositive,
                            "outcome '" + m.label + "' has weight " + std::to_string(t.weight));
            }
        }
        Sector sector{m.label, dil.anc_dim, dil.anc_dim + dec.rank()};
        dil.anc_dim = sector.end;
        dil.sectors.push_back(std::move(sector));
        decs.push_back(std::move(dec));
    }
    if (dil.anc_dim > inst.size() * n * n) {
        throw Error(ErrorCode::DimensionMismatch, "ancilla exceeds mu * N^2");
    }
    dil.conv = CompositeIndex{n, dil.anc_dim};

    CMatrix w = CMatrix::Zero(idx(dil.conv.size()), idx(n));
    for (std::size_t i = 0; i < decs.size(); ++i) {
        for (std::size_t alpha = 0; alpha < decs[i].rank(); ++alpha) {
            const KrausTerm &t = decs[i].terms[alpha];
            std::size_t a = dil.sectors[i].begin + alpha;
            double amp = std::sqrt(std::max(t.weight, 0.0));
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t rp = 0; rp < n; ++rp) {
                    w(idx(dil.conv(r, a)), idx(rp)) = amp * t.op(idx(r), idx(rp));
                }
            }
        }
    }
    dil.u = embed_isometry(w, n, dil.anc_dim, completion);
    return dil;
}

std::vector<OutcomeResult> measure_via_dilation(const InstrumentDilation &dil, const DensityMatrix &rho,
                                                double threshold) {
    if (rho.dim() != dil.sys_dim) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension does not match instrument");
    }
    CMatrix joint = dil.u * embed_state(rho.matrix(), dil.anc_dim) * dil.u.adjoint();
    std::vector<OutcomeResult> results;
    results.reserve(dil.sectors.size());
    for (const Sector &sector : dil.sectors) {
        // I_sys ⊗ Σ_{a in sector} |a><a| is diagonal in the composite basis.
        Eigen::VectorXd mask = Eigen::VectorXd::Zero(idx(dil.conv.size()));
        for (std::size_t r = 0; r < dil.sys_dim; ++r) {
            for (std::size_t a = sector.begin; a < sector.end; ++a) {
                mask(idx(dil.conv(r, a))) = 1.0;
            }
        }
        auto projector = mask.cast<Complex>().asDiagonal();
        CMatrix projected = projector * joint * projector;
        results.push_back(make_outcome(sector.label, partial_trace_b(projected, dil.conv), threshold));
    }
    return results;
}

std::vector<OutcomeResult> outcome_statistics(const Instrument &inst, const DensityMatrix &rho, double threshold) {
    if (rho.dim() != inst.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension does not match instrument");
    }
    std::vector<OutcomeResult> results;
    results.reserve(inst.size());
    for (const LabeledMap &m : inst.maps()) {
        results.push_back(make_outcome(m.label, apply_map(m.map, rho), threshold));
    }
    return results;
}

std::vector<HistogramEntry> sample_outcomes(const InstrumentDilation &dil, const DensityMatrix &rho,
                                            std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw Error(ErrorCode::UsageError, "shots must be at least 1");
    }
    std::vector<OutcomeResult> outcomes = measure_via_dilation(dil, rho);
    std::vector<double> cdf;
    double total = 0.0;
    for (const OutcomeResult &o : outcomes) {
        total += std::max(o.probability, 0.0);
        cdf.push_back(total);
    }
    std::vector<HistogramEntry> hist;
    for (const OutcomeResult &o : outcomes) {
        hist.push_back({o.label, 0});
    }
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        double x = uniform(rng) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        std::size_t k = it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
        ++hist[k].count;
    }
    return hist;
}

Instrument random_instrument(std::size_t dim, std::size_t outcomes, std::uint64_t seed) {
    if (dim == 0 || outcomes == 0) {
        throw Error(ErrorCode::DimensionMismatch, "instrument needs a positive dimension and outcome count");
    }
    Rng rng = make_rng(seed, 0x1257);
    std::vector<std::vector<KrausTerm>> groups(outcomes);
    if (seed % 2 == 1 && outcomes <= dim) {
        CMatrix basis = random_isometry(rng, idx(dim), idx(dim));
        for (std::size_t i = 0; i < outcomes; ++i) {
            CMatrix proj = CMatrix::Zero(idx(dim), idx(dim));
            for (std::size_t k = i; k < dim; k += outcomes) {
                proj += basis.col(idx(k)) * basis.col(idx(k)).adjoint();
            }
            groups[i].push_back({1.0, std::move(proj)});
        }
    } else {
        std::size_t rank = std::min(dim * dim, outcomes + static_cast<std::size_t>(rng() % dim));
        std::vector<CMatrix> ops = random_cptp_kraus(dim, rank, rng());
        for (std::size_t j = 0; j < ops.size(); ++j) {
            groups[j % outcomes].push_back({1.0, std::move(ops[j])});
        }
    }
    std::vector<LabeledMap> maps;
    for (std::size_t i = 0; i < outcomes; ++i) {
        maps.push_back({std::to_string(i), map_from_kraus(groups[i], dim)});
    }
    return Instrument(std::move(maps));
}

}  // namespace dynmap
