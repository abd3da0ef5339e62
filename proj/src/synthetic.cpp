#include "ocboost/synthetic.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "ocboost/errors.hpp"
#include "ocboost/random.hpp"

namespace ocboost {

ColumnProbs gen_probs(std::size_t dims, std::uint64_t seed) {
    if (dims == 0) throw InvalidInput("gen_probs: need at least one column");
    Rng rng(seed);
    ColumnProbs p;
    p.probs.resize(dims);
    for (auto& v : p.probs) v = rng.uniform();
    return p;
}

ColumnProbs drift_probs(const ColumnProbs& p, double perturb_scale, std::uint64_t seed) {
    if (!(perturb_scale >= 0.0)) throw InvalidInput("drift_probs: perturbation scale must be >= 0");
    Rng rng(seed);
    ColumnProbs out = p;
    for (auto& v : out.probs) v = std::clamp(v + perturb_scale * rng.gaussian(), 0.0, 1.0);
    return out;
}

DriftStream gen_drift_stream(const DriftSpec& spec) {
    if (spec.segments == 0 || spec.rows_per_segment == 0 || spec.dims == 0)
        throw InvalidInput("drift spec needs at least one segment, row and column");
    Rng master(spec.seed);
    std::vector<ColumnProbs> probs;
    std::vector<std::size_t> boundaries;
    std::vector<Margin> cells;
    cells.reserve(spec.segments * spec.rows_per_segment * spec.dims);

    for (std::size_t s = 0; s < spec.segments; ++s) {
        probs.push_back(s == 0 ? gen_probs(spec.dims, master.next())
                               : drift_probs(probs.back(), spec.perturb_scale, master.next()));
        if (s > 0) boundaries.push_back(s * spec.rows_per_segment);
        Rng cell_rng(master.next());
        const auto& p = probs.back().probs;
        for (std::size_t i = 0; i < spec.rows_per_segment; ++i)
            for (std::size_t j = 0; j < spec.dims; ++j) cells.push_back(cell_rng.uniform() < p[j] ? 1 : -1);
    }
    return {MarginMatrix(spec.segments * spec.rows_per_segment, spec.dims, std::move(cells)), std::move(boundaries),
            std::move(probs)};
}

void write_stream_metadata(std::ostream& out, const DriftSpec& spec, const DriftStream& stream) {
    nlohmann::ordered_json j;
    j["seed"] = spec.seed;
    j["segments"] = spec.segments;
    j["rows_per_segment"] = spec.rows_per_segment;
    j["J"] = spec.dims;
    j["perturbation"] = {{"model", "additive gaussian, clamped to [0,1] (implementation choice)"},
                         {"scale", spec.perturb_scale}};
    j["generator"] = "mt19937_64; uniform = (u64 >> 11) * 2^-53; gaussian = Box-Muller";
    j["boundaries"] = stream.boundaries;
    auto& segs = j["segment_probs"] = nlohmann::ordered_json::array();
    for (const auto& p : stream.segment_probs) segs.push_back(p.probs);
    out << j.dump(2) << '\n';
}

}  // namespace ocboost
