#include "pgg/game.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pgg {

namespace {

void check_count(int n_c, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (n_c < 0 || n_c > k)
        throw std::invalid_argument("n_c=" + std::to_string(n_c) + " out of [0," + std::to_string(k) + "]");
}

inline double cooperator_value(int n_c, int k, double r) noexcept {
    return r * static_cast<double>(n_c + 1) / static_cast<double>(k + 1) - 1.0;
}

inline double defector_value(int n_c, int k, double r) noexcept {
    return r * static_cast<double>(n_c) / static_cast<double>(k + 1);
}

// Cooperation probability of an agent slot, given the focal player's state.
inline double agent_cooperation(Policy policy, const Genome& focal, bool focal_cooperates,
                                MimicMode mode) noexcept {
    switch (policy) {
        case Policy::MandatoryCooperation: return 1.0;
        case Policy::PlayerControlled: return focal.p_AC;
        case Policy::Mimic:
            if (mode == MimicMode::Independent) return focal.p_C;
            return focal_cooperates ? 1.0 : 0.0;
        case Policy::Baseline: break;
    }
    return 0.0;
}

}  // namespace

double payoff_cooperator(int n_c, int k, double r) {
    check_count(n_c, k);
    return cooperator_value(n_c, k, r);
}

double payoff_defector(int n_c, int k, double r) {
    check_count(n_c, k);
    return defector_value(n_c, k, r);
}

RoleMask sample_role_mask(int k, double rho_A, Rng& rng) {
    RoleMask mask(static_cast<std::size_t>(k), SlotRole::Player);
    for (auto& slot : mask)
        if (rng.bernoulli(rho_A)) slot = SlotRole::Agent;
    return mask;
}

Action resolve_peripheral_action(SlotRole role, Policy policy, const Genome& focal_genome,
                                 Action focal_action, const Genome& peripheral_genome, Rng& rng,
                                 MimicMode mimic_mode) {
    const double u = rng.uniform();
    if (role == SlotRole::Player) return u < peripheral_genome.p_C ? Action::Cooperate : Action::Defect;
    if (policy == Policy::Baseline) throw std::logic_error("agent slot under Baseline policy");
    const double p = agent_cooperation(policy, focal_genome, focal_action == Action::Cooperate, mimic_mode);
    return u < p ? Action::Cooperate : Action::Defect;
}

GameOutcome play_focal_game(const Genome& focal_genome, std::span<const Genome> peripheral_genomes,
                            const SimParams& params, Rng& rng) {
    if (peripheral_genomes.size() != static_cast<std::size_t>(params.k))
        throw std::invalid_argument("expected " + std::to_string(params.k) + " peripheral genomes, got " +
                                    std::to_string(peripheral_genomes.size()));

    GameOutcome out;
    out.focal_action = rng.bernoulli(focal_genome.p_C) ? Action::Cooperate : Action::Defect;
    const RoleMask mask = sample_role_mask(params.k, params.rho_A, rng);

    out.actions_all.reserve(mask.size() + 1);
    out.actions_all.push_back(out.focal_action);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const Action a = resolve_peripheral_action(mask[i], params.policy, focal_genome, out.focal_action,
                                                   peripheral_genomes[i], rng, params.mimic_mode);
        out.actions_all.push_back(a);
        if (mask[i] == SlotRole::Agent) ++out.n_agent_slots;
        if (a == Action::Cooperate) ++out.n_cooperators_peripheral;
    }
    out.focal_payoff = out.focal_action == Action::Cooperate
                           ? payoff_cooperator(out.n_cooperators_peripheral, params.k, params.r)
                           : payoff_defector(out.n_cooperators_peripheral, params.k, params.r);
    return out;
}

GameTally play_focal_game_tally(const Genome& focal_genome, std::span<const Genome> peripheral_genomes,
                                const SimParams& params, Rng& rng) noexcept {
    const int k = params.k;
    const bool focal_c = rng.bernoulli(focal_genome.p_C);

    std::uint64_t agents = 0;
    for (int i = 0; i < k; ++i)
        if (rng.bernoulli(params.rho_A)) agents |= std::uint64_t{1} << i;

    const double agent_p = agent_cooperation(params.policy, focal_genome, focal_c, params.mimic_mode);
    int n_c = 0;
    for (int i = 0; i < k; ++i) {
        const double u = rng.uniform();
        const double p = ((agents >> i) & 1U) ? agent_p : peripheral_genomes[static_cast<std::size_t>(i)].p_C;
        n_c += u < p ? 1 : 0;
    }
    const double payoff = focal_c ? cooperator_value(n_c, k, params.r) : defector_value(n_c, k, params.r);
    return {payoff, n_c + (focal_c ? 1 : 0)};
}

double expected_focal_payoff_oracle(const Genome& focal_genome, std::span<const Genome> peripheral_genomes,
                                    const SimParams& params) {
    const int k = params.k;
    if (k < 1 || k > kOracleMaxNeighbors)
        throw std::invalid_argument("oracle requires 1 <= k <= " + std::to_string(kOracleMaxNeighbors));
    if (peripheral_genomes.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("expected " + std::to_string(k) + " peripheral genomes");

    const double rho = params.rho_A;
    const double r = params.r;
    double expectation = 0.0;

    // Depth-first walk over (role, action) of every slot, for each focal action.
    auto walk = [&](auto&& self, int slot, bool focal_c, double weight, int n_c) -> void {
        if (weight == 0.0) return;
        if (slot == k) {
            const double pool = r * static_cast<double>(n_c + (focal_c ? 1 : 0)) / static_cast<double>(k + 1);
            expectation += weight * (focal_c ? pool - 1.0 : pool);
            return;
        }
        const double player_p = peripheral_genomes[static_cast<std::size_t>(slot)].p_C;
        double agent_p = 0.0;
        if (params.policy == Policy::MandatoryCooperation) {
            agent_p = 1.0;
        } else if (params.policy == Policy::PlayerControlled) {
            agent_p = focal_genome.p_AC;
        } else if (params.policy == Policy::Mimic) {
            agent_p = params.mimic_mode == MimicMode::Independent ? focal_genome.p_C : (focal_c ? 1.0 : 0.0);
        }
        // Player slot.
        self(self, slot + 1, focal_c, weight * (1.0 - rho) * player_p, n_c + 1);
        self(self, slot + 1, focal_c, weight * (1.0 - rho) * (1.0 - player_p), n_c);
        // Agent slot.
        self(self, slot + 1, focal_c, weight * rho * agent_p, n_c + 1);
        self(self, slot + 1, focal_c, weight * rho * (1.0 - agent_p), n_c);
    };
    walk(walk, 0, true, focal_genome.p_C, 0);
    walk(walk, 0, false, 1.0 - focal_genome.p_C, 0);
    return expectation;
}

}  // namespace pgg
