#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pgg {

/// Raised when a parameter set or argument breaks a documented bound.
/// `field()` names the offending parameter.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A player's evolvable strategy.
struct Genome {
    double p_C = 0.5;   // probability the player cooperates
    double p_AC = 0.5;  // probability agents it controls cooperate (PlayerControlled only)

    friend bool operator==(const Genome&, const Genome&) = default;
};

enum class Action : std::uint8_t { Cooperate, Defect };

enum class Policy : std::uint8_t { Baseline, MandatoryCooperation, PlayerControlled, Mimic };

/// How a mimicking agent derives its action from the focal player.
enum class MimicMode : std::uint8_t {
    Realized,     // copy the focal player's realized action
    Independent,  // cooperate with the focal player's p_C, drawn independently
};

enum class InitMode : std::uint8_t {
    Fixed,    // every genome starts at (0.5, 0.5)
    Uniform,  // both probabilities drawn uniformly on [0, 1]
};

enum class SlotRole : std::uint8_t { Player, Agent };

/// Occupant of each peripheral slot of one focal game.
using RoleMask = std::vector<SlotRole>;

char to_char(Action a) noexcept;
Action action_from_char(char c);

std::string_view to_string(Policy p) noexcept;
Policy parse_policy(std::string_view text);

std::string_view to_string(MimicMode m) noexcept;
MimicMode parse_mimic_mode(std::string_view text);

std::string_view to_string(InitMode m) noexcept;
InitMode parse_init_mode(std::string_view text);

inline constexpr int kDefaultNeighbors = 4;
inline constexpr int kMaxNeighbors = 64;  // agent slots of a game fit one 64-bit mask
inline constexpr int kDefaultGridSide = 32;
inline constexpr double kDefaultMutationRate = 0.01;
inline constexpr int kDefaultGenerations = 10000;

struct SimParams {
    int k = kDefaultNeighbors;
    double r = 5.0;
    double rho_A = 0.0;
    Policy policy = Policy::Baseline;
    int population_size = kDefaultGridSide * kDefaultGridSide;
    int grid_width = kDefaultGridSide;
    int grid_height = kDefaultGridSide;
    double mu = kDefaultMutationRate;
    int generations = kDefaultGenerations;
    std::optional<int> games_per_focal;  // unset means k + 1
    std::uint64_t seed = 0;

    InitMode init = InitMode::Fixed;
    MimicMode mimic_mode = MimicMode::Realized;
    std::optional<double> fitness_shift;  // unset means games_per_focal

    int focal_games() const noexcept { return games_per_focal.value_or(k + 1); }
    double shift() const noexcept { return fitness_shift.value_or(static_cast<double>(focal_games())); }

    /// Sets the grid and the matching population size.
    SimParams& with_grid(int width, int height) noexcept {
        grid_width = width;
        grid_height = height;
        population_size = width * height;
        return *this;
    }
};

/// Returns `params` unchanged, or throws ValidationError naming the field.
SimParams validate_params(const SimParams& params);

/// Grid offsets of the k nearest neighbors in a fixed order. For k = 4 this is
/// the von Neumann neighborhood (E, N, W, S); k = 8 adds the diagonals.
struct Offset {
    int dx;
    int dy;
};
std::vector<Offset> neighbor_offsets(int k);

}  // namespace pgg
