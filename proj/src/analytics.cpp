#include "pgg/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pgg {

DilemmaBounds dilemma_bounds(int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    return {1.0, static_cast<double>(k + 1)};
}

double predicted_critical_r(int k, double rho_A) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(rho_A >= 0.0 && rho_A <= 1.0)) throw std::invalid_argument("rho_A out of [0,1]");
    return static_cast<double>(k + 1) / (rho_A * static_cast<double>(k) + 1.0);
}

double mimic_cooperation_margin(int k, double rho_A, int n_c, double r) {
    if (n_c < 0 || n_c > k) throw std::invalid_argument("n_c out of [0,k]");
    const double kk = static_cast<double>(k);
    const double n_d = kk - n_c;
    const double defectors_left = (1.0 - rho_A) * n_d;                     // focal cooperates
    const double cooperators_left = (1.0 - rho_A) * static_cast<double>(n_c);  // focal defects
    const double as_cooperator = r * (kk - defectors_left + 1.0) / (kk + 1.0) - 1.0;
    const double as_defector = r * cooperators_left / (kk + 1.0);
    return as_cooperator - as_defector;
}

LodSeries reconstruct_lod(std::span<const Genome> initial_genomes, std::span<const GenerationRecord> records,
                          std::size_t final_pick, double truncation_fraction) {
    if (!(truncation_fraction >= 0.0 && truncation_fraction < 1.0))
        throw std::invalid_argument("truncation_fraction out of [0,1)");
    const std::size_t n = initial_genomes.size();
    if (final_pick >= n) throw std::invalid_argument("final_pick out of range");

    // Individual on the line at each generation, leaf first.
    std::vector<std::size_t> line(records.size() + 1);
    line[records.size()] = final_pick;
    for (std::size_t t = records.size(); t-- > 0;) {
        const auto& parents = records[t].parent_index;
        if (parents.size() != n)
            throw IntegrityError("generation " + std::to_string(t) + ": ancestry has " +
                                 std::to_string(parents.size()) + " links, expected " + std::to_string(n));
        const std::size_t parent = parents[line[t + 1]];
        if (parent >= n)
            throw IntegrityError("generation " + std::to_string(t) + ": parent index " + std::to_string(parent) +
                                 " out of range");
        line[t] = parent;
    }

    LodSeries lod;
    lod.truncation_fraction = truncation_fraction;
    lod.genomes.reserve(line.size());
    Genome current = initial_genomes[line[0]];
    lod.genomes.push_back(current);
    for (std::size_t t = 0; t < records.size(); ++t) {
        const auto& muts = records[t].mutations;
        const auto child = static_cast<std::uint32_t>(line[t + 1]);
        auto it = std::lower_bound(muts.begin(), muts.end(), child,
                                   [](const MutationEvent& m, std::uint32_t id) { return m.offspring < id; });
        if (it != muts.end() && it->offspring == child) current = it->genome;
        lod.genomes.push_back(current);
    }
    return lod;
}

LodSeries reconstruct_lod(const RunResult& run, std::size_t final_pick, double truncation_fraction) {
    if (!run.records.empty() && run.initial_genomes.empty())
        throw IntegrityError("run was recorded without lineage");
    return reconstruct_lod(run.initial_genomes, run.records, final_pick, truncation_fraction);
}

double lod_statistic(const LodSeries& lod, std::pair<double, double> window) {
    const auto [start, end] = window;
    if (!(start >= 0.0 && start < end)) throw std::invalid_argument("window must satisfy 0 <= start < end");
    if (end > 1.0 - lod.truncation_fraction + 1e-12)
        throw std::invalid_argument("window reaches into the truncated final " +
                                    std::to_string(lod.truncation_fraction) + " of the LOD");
    const double total = static_cast<double>(lod.genomes.size());
    const auto first = static_cast<std::size_t>(std::floor(start * total));
    const auto last = std::min(lod.genomes.size(), static_cast<std::size_t>(std::floor(end * total)));
    if (first >= last) throw std::invalid_argument("window selects no LOD entries");
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) sum += lod.genomes[i].p_C;
    return sum / static_cast<double>(last - first);
}

std::optional<double> extract_critical_r(const ResponseCurve& curve, double threshold) {
    const auto& pts = curve.points;
    if (pts.size() < 2) throw std::invalid_argument("response curve needs at least 2 points");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!(pts[i].r > pts[i - 1].r)) throw std::invalid_argument("response curve must be strictly ascending in r");

    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& a = pts[i - 1];
        const auto& b = pts[i];
        if (a.value < threshold && threshold <= b.value)
            return a.r + (b.r - a.r) * (threshold - a.value) / (b.value - a.value);
    }
    return std::nullopt;
}

ConvergenceStats convergence_statistics(std::span<const GenerationRecord> records, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("fraction out of (0,1]");
    ConvergenceStats stats;
    if (records.empty()) return stats;
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(records.size()))));
    for (const auto& rec : records.last(count)) {
        stats.mean_p_C += rec.mean_p_C;
        stats.mean_p_AC += rec.mean_p_AC;
        stats.coop_frequency += rec.coop_frequency;
    }
    const double c = static_cast<double>(count);
    stats.mean_p_C /= c;
    stats.mean_p_AC /= c;
    stats.coop_frequency /= c;
    return stats;
}

}  // namespace pgg
