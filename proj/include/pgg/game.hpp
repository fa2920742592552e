#pragma once

#include <span>
#include <vector>

#include "pgg/model.hpp"
#include "pgg/rng.hpp"

namespace pgg {

/// Focal payoff when cooperating with `n_c` cooperating neighbors, in units of the ante.
double payoff_cooperator(int n_c, int k, double r);

/// Focal payoff when defecting with `n_c` cooperating neighbors.
double payoff_defector(int n_c, int k, double r);

/// Each of the k slots is independently an agent with probability rho_A.
/// Consumes exactly k draws.
RoleMask sample_role_mask(int k, double rho_A, Rng& rng);

/// Action of one peripheral slot. Consumes exactly one draw regardless of the
/// outcome so that a game's draw count depends only on k.
/// Throws std::logic_error for an agent slot under Policy::Baseline.
Action resolve_peripheral_action(SlotRole role, Policy policy, const Genome& focal_genome,
                                 Action focal_action, const Genome& peripheral_genome, Rng& rng,
                                 MimicMode mimic_mode = MimicMode::Realized);

struct GameOutcome {
    Action focal_action = Action::Defect;
    double focal_payoff = 0.0;
    int n_cooperators_peripheral = 0;
    int n_agent_slots = 0;
    std::vector<Action> actions_all;  // focal first, then slots in neighbor order
};

/// Compact result of one focal game, used by the generation loop.
struct GameTally {
    double focal_payoff;
    int cooperators;  // among all k + 1 participants
};

/// Number of draws a focal game consumes: one for the focal action, k for the
/// role mask, k for peripheral actions.
constexpr int draws_per_game(int k) noexcept { return 2 * k + 1; }

/// Plays one focal game. Throws std::invalid_argument unless there are
/// exactly params.k peripheral genomes.
GameOutcome play_focal_game(const Genome& focal_genome, std::span<const Genome> peripheral_genomes,
                            const SimParams& params, Rng& rng);

/// Same draw sequence and payoff as play_focal_game, without building the
/// per-slot action list. Preconditions are not checked.
GameTally play_focal_game_tally(const Genome& focal_genome, std::span<const Genome> peripheral_genomes,
                                const SimParams& params, Rng& rng) noexcept;

/// Exact expectation of play_focal_game's focal payoff by enumerating every
/// role mask and every action profile. Requires k <= kOracleMaxNeighbors.
inline constexpr int kOracleMaxNeighbors = 12;
double expected_focal_payoff_oracle(const Genome& focal_genome, std::span<const Genome> peripheral_genomes,
                                    const SimParams& params);

}  // namespace pgg
