#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pgg/evolution.hpp"
#include "pgg/model.hpp"

namespace pgg {

/// Broken ancestry links or mutation records that point outside the population.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DilemmaBounds {
    double r_low;
    double r_high;
};

/// The synergy range (1, k + 1) in which defection beats cooperation
/// individually although full cooperation beats full defection.
DilemmaBounds dilemma_bounds(int k);

/// Synergy above which cooperating pays when a fraction rho_A of the focal
/// player's neighbors copy its action: (k + 1) / (rho_A k + 1).
double predicted_critical_r(int k, double rho_A);

/// P_C - P_D for a focal player whose k neighbors hold n_c cooperators,
/// where each neighbor copies the focal action with probability rho_A.
/// Non-negative exactly when r >= predicted_critical_r(k, rho_A).
double mimic_cooperation_margin(int k, double rho_A, int n_c, double r);

inline constexpr double kDefaultTruncation = 0.25;

struct LodSeries {
    std::vector<Genome> genomes;  // generation 0 first
    double truncation_fraction = kDefaultTruncation;
};

/// Walks parent links from individual `final_pick` of the last generation back
/// to generation 0 and replays mutations forward along that line.
/// Throws IntegrityError on a missing or out-of-range link.
LodSeries reconstruct_lod(std::span<const Genome> initial_genomes, std::span<const GenerationRecord> records,
                          std::size_t final_pick, double truncation_fraction = kDefaultTruncation);
LodSeries reconstruct_lod(const RunResult& run, std::size_t final_pick,
                          double truncation_fraction = kDefaultTruncation);

/// Mean p_C over entries [start * T, end * T) of the LOD, T its length. The
/// window may not reach into the truncated tail.
double lod_statistic(const LodSeries& lod, std::pair<double, double> window = {0.5, 0.75});

struct CurvePoint {
    double r;
    double value;
};

struct ResponseCurve {
    std::vector<CurvePoint> points;  // strictly ascending in r
};

struct CriticalPoint {
    double rho_A = 0.0;
    std::optional<double> r_critical;
};

inline constexpr double kDefaultCriticalThreshold = 0.5;

/// Linear interpolation at the first upward crossing of `threshold`:
/// first pair with v1 < threshold <= v2. Empty when the curve never crosses.
std::optional<double> extract_critical_r(const ResponseCurve& curve, double threshold = kDefaultCriticalThreshold);

inline constexpr double kDefaultConvergenceFraction = 0.1;

/// Population means averaged over the last `fraction` of a run's generations.
struct ConvergenceStats {
    double mean_p_C = 0.0;
    double mean_p_AC = 0.0;
    double coop_frequency = 0.0;
};
ConvergenceStats convergence_statistics(std::span<const GenerationRecord> records,
                                        double fraction = kDefaultConvergenceFraction);

}  // namespace pgg
