#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pgg/model.hpp"
#include "pgg/rng.hpp"

namespace pgg {

/// Torus neighbor table: for each cell, the cells of its k neighbors in
/// neighbor_offsets order.
class Neighborhood {
public:
    Neighborhood(int width, int height, int k);
    explicit Neighborhood(const SimParams& params)
        : Neighborhood(params.grid_width, params.grid_height, params.k) {}

    int k() const noexcept { return k_; }
    int cells() const noexcept { return cells_; }
    std::span<const std::uint32_t> of(int cell) const noexcept {
        return {table_.data() + static_cast<std::size_t>(cell) * static_cast<std::size_t>(k_),
                static_cast<std::size_t>(k_)};
    }

private:
    int k_;
    int cells_;
    std::vector<std::uint32_t> table_;
};

struct PopulationState {
    std::vector<Genome> genomes;
    int generation = 0;
    Rng rng;
};

/// An offspring whose genome differs from its parent's after mutation.
struct MutationEvent {
    std::uint32_t offspring;
    Genome genome;

    friend bool operator==(const MutationEvent&, const MutationEvent&) = default;
};

struct GenerationRecord {
    int generation = 0;
    double mean_p_C = 0.0;
    double mean_p_AC = 0.0;
    double coop_frequency = 0.0;
    // Ancestry: parent_index[j] is the index in this generation of the parent
    // of individual j in the next. Mutations are sorted by offspring index.
    // Both are empty when lineage recording is off.
    std::vector<std::uint32_t> parent_index;
    std::vector<MutationEvent> mutations;
};

struct RunResult {
    SimParams params;
    std::vector<GenerationRecord> records;
    std::vector<Genome> initial_genomes;  // empty when lineage recording is off
    std::vector<Genome> final_genomes;
};

struct RunOptions {
    bool record_lineage = true;
};

struct GenerationScores {
    std::vector<double> scores;
    double coop_frequency = 0.0;
};

/// Population of `population_size` genomes at generation 0, stream seeded from params.seed.
PopulationState initialize_population(const SimParams& params);

/// Places players on the torus by a fresh uniform permutation and lets every
/// player play focal_games() focal games against its grid neighbors.
GenerationScores score_generation(PopulationState& state, const SimParams& params,
                                  const Neighborhood& neighborhood);
GenerationScores score_generation(PopulationState& state, const SimParams& params);

/// Shifts scores by games_per_focal so every weight is non-negative.
std::vector<double> fitness_transform(std::span<const double> scores, int k, int games_per_focal);
/// Same with an explicit shift; negative results clamp to zero. All-zero
/// weights fall back to uniform.
std::vector<double> fitness_transform(std::span<const double> scores, double shift);

/// `count` fitness-proportional draws with replacement.
/// Throws std::invalid_argument if no weight is positive.
std::vector<std::uint32_t> roulette_select(std::span<const double> weights, std::size_t count, Rng& rng);

Genome mutate(const Genome& genome, double mu, Rng& rng);

/// Advances `state` one generation and returns the record describing the
/// generation it was in before the step.
GenerationRecord step_generation(PopulationState& state, const SimParams& params,
                                 const Neighborhood& neighborhood, bool record_lineage = true);

RunResult run_simulation(const SimParams& params, const RunOptions& options = {});

}  // namespace pgg
