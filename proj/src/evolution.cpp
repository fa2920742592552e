#include "pgg/evolution.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "pgg/game.hpp"

namespace pgg {

Neighborhood::Neighborhood(int width, int height, int k) : k_(k), cells_(width * height) {
    if (width < 1 || height < 1) throw ValidationError("grid", "grid dimensions must be positive");
    const auto offsets = neighbor_offsets(k);
    table_.resize(static_cast<std::size_t>(cells_) * static_cast<std::size_t>(k));
    auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
    std::size_t at = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (const auto& o : offsets)
                table_[at++] = static_cast<std::uint32_t>(wrap(y + o.dy, height) * width + wrap(x + o.dx, width));
}

PopulationState initialize_population(const SimParams& params) {
    PopulationState state;
    state.rng.reseed(params.seed);
    state.genomes.assign(static_cast<std::size_t>(params.population_size), Genome{0.5, 0.5});
    if (params.init == InitMode::Uniform)
        for (auto& g : state.genomes) g = Genome{state.rng.uniform(), state.rng.uniform()};
    return state;
}

GenerationScores score_generation(PopulationState& state, const SimParams& params,
                                  const Neighborhood& neighborhood) {
    const auto n = state.genomes.size();
    const int k = params.k;
    const int games = params.focal_games();

    // cell -> player, Fisher-Yates.
    std::vector<std::uint32_t> occupant(n);
    std::iota(occupant.begin(), occupant.end(), 0U);
    for (std::size_t i = n; i > 1; --i)
        std::swap(occupant[i - 1], occupant[state.rng.below(i)]);

    GenerationScores out;
    out.scores.assign(n, 0.0);
    std::array<Genome, kMaxNeighbors> peripheral{};
    const std::span<const Genome> peripheral_view(peripheral.data(), static_cast<std::size_t>(k));
    std::uint64_t cooperators = 0;

    for (std::size_t cell = 0; cell < n; ++cell) {
        const auto focal = occupant[cell];
        const auto around = neighborhood.of(static_cast<int>(cell));
        for (int i = 0; i < k; ++i) peripheral[static_cast<std::size_t>(i)] = state.genomes[occupant[around[i]]];

        double total = 0.0;
        for (int g = 0; g < games; ++g) {
            const GameTally t = play_focal_game_tally(state.genomes[focal], peripheral_view, params, state.rng);
            total += t.focal_payoff;
            cooperators += static_cast<std::uint64_t>(t.cooperators);
        }
        out.scores[focal] = total;
    }
    const double actions = static_cast<double>(n) * games * (k + 1);
    out.coop_frequency = n == 0 ? 0.0 : static_cast<double>(cooperators) / actions;
    return out;
}

GenerationScores score_generation(PopulationState& state, const SimParams& params) {
    return score_generation(state, params, Neighborhood(params));
}

std::vector<double> fitness_transform(std::span<const double> scores, int /*k*/, int games_per_focal) {
    return fitness_transform(scores, static_cast<double>(games_per_focal));
}

std::vector<double> fitness_transform(std::span<const double> scores, double shift) {
    std::vector<double> weights(scores.size());
    bool any_positive = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        weights[i] = std::max(0.0, scores[i] + shift);
        any_positive = any_positive || weights[i] > 0.0;
    }
    if (!any_positive) std::fill(weights.begin(), weights.end(), 1.0);
    return weights;
}

std::vector<std::uint32_t> roulette_select(std::span<const double> weights, std::size_t count, Rng& rng) {
    std::vector<double> cumulative(weights.size());
    double running = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw std::invalid_argument("roulette weights must be non-negative");
        running += weights[i];
        cumulative[i] = running;
        if (weights[i] > 0.0) last_positive = i;
    }
    if (last_positive == weights.size()) throw std::invalid_argument("roulette needs at least one positive weight");

    std::vector<std::uint32_t> picks(count);
    for (auto& pick : picks) {
        const double spin = rng.uniform() * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), spin);
        const auto idx = static_cast<std::size_t>(it - cumulative.begin());
        // Rounding can land the spin on the total.
        pick = static_cast<std::uint32_t>(idx < weights.size() ? idx : last_positive);
    }
    return picks;
}

Genome mutate(const Genome& genome, double mu, Rng& rng) {
    Genome out = genome;
    if (rng.bernoulli(mu)) out.p_C = rng.uniform();
    if (rng.bernoulli(mu)) out.p_AC = rng.uniform();
    return out;
}

GenerationRecord step_generation(PopulationState& state, const SimParams& params,
                                 const Neighborhood& neighborhood, bool record_lineage) {
    const auto n = state.genomes.size();
    GenerationRecord record;
    record.generation = state.generation;
    if (n > 0) {
        double sum_c = 0.0;
        double sum_ac = 0.0;
        for (const auto& g : state.genomes) {
            sum_c += g.p_C;
            sum_ac += g.p_AC;
        }
        record.mean_p_C = sum_c / static_cast<double>(n);
        record.mean_p_AC = sum_ac / static_cast<double>(n);
    }

    const GenerationScores scored = score_generation(state, params, neighborhood);
    record.coop_frequency = scored.coop_frequency;

    const auto weights = fitness_transform(scored.scores, params.shift());
    auto parents = roulette_select(weights, n, state.rng);

    std::vector<Genome> next(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Genome& parent = state.genomes[parents[j]];
        next[j] = mutate(parent, params.mu, state.rng);
        if (record_lineage && !(next[j] == parent))
            record.mutations.push_back({static_cast<std::uint32_t>(j), next[j]});
    }
    if (record_lineage) record.parent_index = std::move(parents);

    state.genomes = std::move(next);
    ++state.generation;
    return record;
}

RunResult run_simulation(const SimParams& params, const RunOptions& options) {
    const SimParams checked = validate_params(params);
    const Neighborhood neighborhood(checked);

    RunResult result;
    result.params = checked;
    PopulationState state = initialize_population(checked);
    if (options.record_lineage) result.initial_genomes = state.genomes;

    result.records.reserve(static_cast<std::size_t>(checked.generations));
    for (int t = 0; t < checked.generations; ++t)
        result.records.push_back(step_generation(state, checked, neighborhood, options.record_lineage));
    result.final_genomes = std::move(state.genomes);
    return result;
}

}  // namespace pgg
