#include "pgg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

namespace pgg {

char to_char(Action a) noexcept { return a == Action::Cooperate ? 'C' : 'D'; }

Action action_from_char(char c) {
    switch (c) {
        case 'C': return Action::Cooperate;
        case 'D': return Action::Defect;
        default: throw std::invalid_argument(std::string("unknown action '") + c + "'");
    }
}

std::string_view to_string(Policy p) noexcept {
    switch (p) {
        case Policy::Baseline: return "baseline";
        case Policy::MandatoryCooperation: return "mandatory";
        case Policy::PlayerControlled: return "player_controlled";
        case Policy::Mimic: return "mimic";
    }
    return "?";
}

Policy parse_policy(std::string_view text) {
    if (text == "baseline") return Policy::Baseline;
    if (text == "mandatory" || text == "mandatory_cooperation") return Policy::MandatoryCooperation;
    if (text == "player_controlled" || text == "player-controlled") return Policy::PlayerControlled;
    if (text == "mimic") return Policy::Mimic;
    throw ValidationError("policy", "unknown policy '" + std::string(text) +
                                        "' (expected baseline|mandatory|player_controlled|mimic)");
}

std::string_view to_string(MimicMode m) noexcept {
    return m == MimicMode::Realized ? "realized" : "independent";
}

MimicMode parse_mimic_mode(std::string_view text) {
    if (text == "realized") return MimicMode::Realized;
    if (text == "independent") return MimicMode::Independent;
    throw ValidationError("mimic_mode", "unknown mimic_mode '" + std::string(text) +
                                            "' (expected realized|independent)");
}

std::string_view to_string(InitMode m) noexcept { return m == InitMode::Fixed ? "fixed" : "uniform"; }

InitMode parse_init_mode(std::string_view text) {
    if (text == "fixed") return InitMode::Fixed;
    if (text == "uniform") return InitMode::Uniform;
    throw ValidationError("init", "unknown init '" + std::string(text) + "' (expected fixed|uniform)");
}

std::vector<Offset> neighbor_offsets(int k) {
    if (k < 1) throw ValidationError("k", "k must be >= 1");
    // Smallest square window holding at least k + 1 cells.
    int radius = 1;
    while ((2 * radius + 1) * (2 * radius + 1) < k + 1) ++radius;

    std::vector<Offset> all;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx != 0 || dy != 0) all.push_back({dx, dy});

    // Nearest first; ties broken counter-clockwise starting due east.
    auto angle = [](const Offset& o) {
        double a = std::atan2(static_cast<double>(o.dy), static_cast<double>(o.dx));
        return a < 0 ? a + 2 * std::numbers::pi : a;
    };
    std::sort(all.begin(), all.end(), [&](const Offset& a, const Offset& b) {
        int da = a.dx * a.dx + a.dy * a.dy;
        int db = b.dx * b.dx + b.dy * b.dy;
        if (da != db) return da < db;
        return angle(a) < angle(b);
    });
    all.resize(static_cast<std::size_t>(k));
    return all;
}

namespace {

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ValidationError(field, message);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

SimParams validate_params(const SimParams& params) {
    require(params.k >= 1 && params.k <= kMaxNeighbors, "k",
            "k must be in [1," + std::to_string(kMaxNeighbors) + "] (got " + std::to_string(params.k) + ")");
    require(std::isfinite(params.r) && params.r > 0.0, "r", "r must be > 0");
    require(in_unit(params.rho_A), "rho_A", "rho_A out of [0,1]");
    require(in_unit(params.mu), "mu", "mu out of [0,1]");
    require(params.grid_width >= 1, "grid_width", "grid_width must be >= 1");
    require(params.grid_height >= 1, "grid_height", "grid_height must be >= 1");
    require(params.population_size == params.grid_width * params.grid_height, "population_size",
            "population_size must equal grid_width * grid_height");
    require(params.generations >= 0, "generations", "generations must be >= 0");
    require(params.focal_games() >= 1, "games_per_focal", "games_per_focal must be >= 1");
    if (params.fitness_shift)
        require(std::isfinite(*params.fitness_shift), "fitness_shift", "fitness_shift must be finite");
    if (params.policy == Policy::Baseline)
        require(params.rho_A == 0.0, "rho_A", "Baseline requires rho_A=0");

    // The k neighbors of any cell must be distinct torus cells other than itself.
    std::set<std::pair<int, int>> seen{{0, 0}};
    for (const auto& o : neighbor_offsets(params.k)) {
        const int x = ((o.dx % params.grid_width) + params.grid_width) % params.grid_width;
        const int y = ((o.dy % params.grid_height) + params.grid_height) % params.grid_height;
        require(seen.emplace(x, y).second, "grid",
                "grid " + std::to_string(params.grid_width) + "x" + std::to_string(params.grid_height) +
                    " too small for k=" + std::to_string(params.k));
    }
    return params;
}

}  // namespace pgg
