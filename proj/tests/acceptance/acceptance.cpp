// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "../support/stats.hpp"
#include "pgg/analytics.hpp"
#include "pgg/cli.hpp"
#include "pgg/evolution.hpp"
#include "pgg/game.hpp"
#include "pgg/io.hpp"
#include "pgg/sweep.hpp"

namespace {

using namespace pgg;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[fail] " << what << "; ";
        }
    }
};

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> out;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
    return out;
}

SweepConfig desk_scale(Policy policy, std::vector<double> r_values, std::vector<double> rho_values,
                       std::uint64_t seed) {
    SweepConfig cfg;
    cfg.base.policy = policy;
    cfg.base.k = 4;
    cfg.base.with_grid(16, 16);
    cfg.base.generations = 3000;
    cfg.replicates = 20;
    cfg.r_values = std::move(r_values);
    cfg.rho_values = std::move(rho_values);
    cfg.master_seed = seed;
    cfg.parallelism = 8;
    return cfg;
}

std::string show(const std::optional<double>& v) { return v ? format_real(*v) : std::string("none"); }

// 1. Closed-form threshold.
void predict_exact(Verdict& v) {
    std::ostringstream out, err;
    const int code = cli::run({"predict", "--k", "4"}, out, err);
    v.check(code == 0, "predict exit code " + std::to_string(code));
    const std::string expected =
        "k,rho_A,r_low,r_high,r_critical\n"
        "4,0,1.000000,5.000000,5.000000\n"
        "4,0.25,1.000000,5.000000,2.500000\n"
        "4,0.5,1.000000,5.000000,1.666667\n"
        "4,0.75,1.000000,5.000000,1.250000\n"
        "4,1,1.000000,5.000000,1.000000\n";
    v.check(out.str() == expected, "predict output:\n" + out.str());
    v.check(predicted_critical_r(4, 0.0) == 5.0 && predicted_critical_r(4, 1.0) == 1.0, "endpoints not exact");
    v.detail << "r_critical(0)=" << predicted_critical_r(4, 0.0) << " r_critical(1)=" << predicted_critical_r(4, 1.0);
}

// 2. Mandatory cooperation leaves the critical r at the dilemma bound.
void mandatory_invariance(Verdict& v) {
    std::vector<double> xs, ys;
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
        const auto result =
            run_sweep(desk_scale(Policy::MandatoryCooperation, grid(3.5, 6.5, 0.25), {0.0, 0.5, 1.0}, 1000 + rep));
        for (const auto& cp : result.critical_points) {
            v.detail << "rep" << rep << " rho=" << format_real(cp.rho_A) << ":" << show(cp.r_critical) << " ";
            v.check(cp.r_critical && std::abs(*cp.r_critical - 5.0) <= 0.75,
                    "r_critical " + show(cp.r_critical) + " at rho_A=" + format_real(cp.rho_A));
            if (cp.r_critical) {
                xs.push_back(cp.rho_A);
                ys.push_back(*cp.r_critical);
            }
        }
    }
    if (xs.size() >= 3) {
        const auto slope = pgg::testing::slope_test(xs, ys);
        v.detail << "slope=" << format_real(slope.slope) << " p=" << format_real(slope.p_value);
        v.check(slope.p_value > 0.05, "slope significantly nonzero");
    } else {
        v.check(false, "too few crossings for slope test");
    }
}

// 3. Player-controlled agents are driven to cooperate without moving the player threshold.
void player_controlled(Verdict& v) {
    const auto result = run_sweep(desk_scale(Policy::PlayerControlled, grid(3.5, 6.5, 0.25), {0.0, 0.25, 0.75}, 2000));
    const std::size_t nr = result.config.r_values.size();
    double drift = 0.0;
    for (std::size_t j = 0; j < nr; ++j) drift += result.cell(0, j).mean_p_AC;
    drift /= static_cast<double>(nr);
    v.detail << "rho=0 mean p_AC=" << format_real(drift) << " ";
    v.check(std::abs(drift - 0.5) <= 0.1, "drift p_AC " + format_real(drift));
    for (std::size_t i = 1; i < result.config.rho_values.size(); ++i) {
        double min_pac = 1.0;
        for (std::size_t j = 0; j < nr; ++j) {
            const auto& c = result.cell(i, j);
            if (c.r >= 2.0) min_pac = std::min(min_pac, c.mean_p_AC);
        }
        const auto& cp = result.critical_points[i];
        v.detail << "rho=" << format_real(cp.rho_A) << " min p_AC=" << format_real(min_pac)
                 << " r_critical=" << show(cp.r_critical) << " ";
        v.check(min_pac > 0.9, "p_AC " + format_real(min_pac) + " at rho_A=" + format_real(cp.rho_A));
        v.check(cp.r_critical && std::abs(*cp.r_critical - 5.0) <= 0.75,
                "r_critical " + show(cp.r_critical) + " at rho_A=" + format_real(cp.rho_A));
    }
}

// 4. Mimic agents lower the threshold to the closed form.
void mimic_matches_prediction(Verdict& v) {
    const auto result = run_sweep(desk_scale(Policy::Mimic, grid(1.0, 6.0, 0.25), {0.25, 0.5, 0.75}, 3000));
    const double targets[] = {2.5, 1.667, 1.25};
    std::optional<double> prev;
    for (std::size_t i = 0; i < result.critical_points.size(); ++i) {
        const auto& cp = result.critical_points[i];
        v.detail << "rho=" << format_real(cp.rho_A) << ":" << show(cp.r_critical) << " ";
        v.check(cp.r_critical && std::abs(*cp.r_critical - targets[i]) <= 0.5,
                "r_critical " + show(cp.r_critical) + " at rho_A=" + format_real(cp.rho_A));
        if (prev && cp.r_critical) v.check(*cp.r_critical < *prev, "not strictly decreasing");
        prev = cp.r_critical;
    }
}

// 5. Monte Carlo payoff agrees with exhaustive enumeration.
void oracle_equivalence(Verdict& v) {
    Rng draw(5150);
    const Policy policies[] = {Policy::Baseline, Policy::MandatoryCooperation, Policy::PlayerControlled, Policy::Mimic};
    const int ks[] = {2, 4, 6};
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        SimParams p;
        p.k = ks[draw.below(3)];
        p.policy = policies[trial % 4];
        p.r = 1.0 + 7.0 * draw.uniform();
        p.rho_A = p.policy == Policy::Baseline ? 0.0 : draw.uniform();
        const Genome focal{draw.uniform(), draw.uniform()};
        std::vector<Genome> peers(static_cast<std::size_t>(p.k));
        for (auto& g : peers) g = Genome{draw.uniform(), draw.uniform()};

        const double expected = expected_focal_payoff_oracle(focal, peers, p);
        Rng rng(9000 + static_cast<std::uint64_t>(trial));
        constexpr int n = 100000;
        double sum = 0.0, sq = 0.0;
        for (int g = 0; g < n; ++g) {
            const double x = play_focal_game(focal, peers, p, rng).focal_payoff;
            sum += x;
            sq += x * x;
        }
        const double mean = sum / n;
        const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
        const double se = std::sqrt(var / n);
        const double z = se > 0.0 ? std::abs(mean - expected) / se : (mean == expected ? 0.0 : INFINITY);
        worst = std::max(worst, z);
        v.check(z <= 4.0, "trial " + std::to_string(trial) + " off by " + format_real(z) + " SE");
    }
    v.detail << "max |z|=" << format_real(worst);
}

// 6. Payoff algebra and the mimic sign flip.
void payoff_algebra(Verdict& v) {
    Rng rng(6006);
    double worst = 0.0;
    int flips = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(20));
        const int n_c = static_cast<int>(rng.below(static_cast<std::uint64_t>(k) + 1));
        const double r = 1.0 + 9.0 * rng.uniform();
        const double pd = payoff_defector(n_c, k, r);
        const double pc = payoff_cooperator(n_c, k, r);
        const double err = std::abs((pd - pc) - (1.0 - r / (k + 1)));
        // in ulps of the operands of the subtraction
        worst = std::max(worst, err / (std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(pd), std::abs(pc)})));

        const int km = std::min(k, 12);
        const double rho = rng.uniform();
        const int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(km) + 1));
        const double t = predicted_critical_r(km, rho);
        const bool flips_here = mimic_cooperation_margin(km, rho, m, t * (1 + 1e-9)) > 0.0 &&
                                mimic_cooperation_margin(km, rho, m, t * (1 - 1e-9)) < 0.0 &&
                                std::abs(mimic_cooperation_margin(km, rho, m, t)) <= 1e-12;
        flips += flips_here;
    }
    v.detail << "max error=" << format_real(worst) << " ulp, sign flips at threshold " << flips << "/10000";
    v.check(worst <= 4.0, "payoff gap error " + format_real(worst) + " ulp");
    v.check(flips == 10000, "sign flip missing");
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// 7. Bitwise-identical output across parallelism and invocations.
void determinism(Verdict& v) {
    const auto dir = std::filesystem::temp_directory_path() / "pgg_acceptance";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "sweep.cfg";
    std::ofstream(cfg) << "policy=mimic\nr_values=1.0,2.0,3.0,4.0,5.0\nrho_values=0,0.25,0.5\nreplicates=6\n"
                          "generations=300\ngrid_width=10\ngrid_height=10\nmaster_seed=777\n";
    std::vector<std::string> outputs;
    for (const char* par : {"1", "8", "1", "8"}) {
        const auto csv = dir / ("sweep_" + std::to_string(outputs.size()) + ".csv");
        std::ostringstream out, err;
        const int code =
            cli::run({"sweep", "--config", cfg.string(), "--parallelism", par, "--out", csv.string()}, out, err);
        v.check(code == 0, "sweep exit " + std::to_string(code) + ": " + err.str());
        outputs.push_back(slurp(csv));
    }
    bool same = !outputs[0].empty();
    for (const auto& o : outputs) same = same && o == outputs[0];
    v.check(same, "sweep CSVs differ");
    v.detail << outputs.size() << " CSVs of " << outputs[0].size() << " bytes identical=" << (same ? "yes" : "no");
}

// 8. Selection and mutation statistics at alpha = 0.001.
void selection_mutation(Verdict& v) {
    constexpr double alpha = 0.001;
    Rng rng(8008);

    const auto degenerate = roulette_select(std::vector<double>{1.0, 0.0}, 100, rng);
    v.check(std::all_of(degenerate.begin(), degenerate.end(), [](auto i) { return i == 0; }), "degenerate wheel");

    constexpr std::size_t n = 100000;
    const auto picks = roulette_select(std::vector<double>{3.0, 1.0}, n, rng);
    const auto zeros = static_cast<std::size_t>(std::count(picks.begin(), picks.end(), 0U));
    v.check(pgg::testing::within_binomial(zeros, n, 0.75), "3:1 wheel frequency " + std::to_string(zeros));

    const std::vector<double> flat(50, 1.0);
    const auto uniform_picks = roulette_select(flat, n, rng);
    std::vector<std::size_t> counts(flat.size(), 0);
    for (auto i : uniform_picks) ++counts[i];
    const double chi_p = pgg::testing::chi_square_uniform_pvalue(counts);
    v.check(chi_p > alpha, "uniform wheel chi-square p=" + format_real(chi_p));

    const Genome g{0.3, 0.7};
    bool unchanged = true;
    for (int i = 0; i < 1000; ++i) unchanged = unchanged && mutate(g, 0.0, rng) == g;
    v.check(unchanged, "mu=0 changed a genome");

    std::vector<double> redraws;
    redraws.reserve(n);
    for (std::size_t i = 0; i < n; ++i) redraws.push_back(mutate(g, 1.0, rng).p_C);
    const double ks_p = pgg::testing::ks_uniform_pvalue(redraws);
    v.check(ks_p > alpha, "mu=1 KS p=" + format_real(ks_p));

    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) changed += mutate(g, 0.01, rng).p_C != g.p_C;
    v.check(pgg::testing::within_binomial(changed, n, 0.01), "mu=0.01 changed " + std::to_string(changed));

    v.detail << "3:1 freq=" << format_real(static_cast<double>(zeros) / n) << " chi2 p=" << format_real(chi_p)
             << " KS p=" << format_real(ks_p) << " mutation rate=" << format_real(static_cast<double>(changed) / n);
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<void(Verdict&)>> criteria[] = {
        {"1 analytic threshold", predict_exact},
        {"2 mandatory invariance", mandatory_invariance},
        {"3 player-controlled", player_controlled},
        {"4 mimic threshold", mimic_matches_prediction},
        {"5 oracle equivalence", oracle_equivalence},
        {"6 payoff algebra", payoff_algebra},
        {"7 determinism", determinism},
        {"8 selection/mutation statistics", selection_mutation},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            fn(v);
        } catch (const std::exception& e) {
            v.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail.str().c_str());
        std::fflush(stdout);
        failures += !v.pass;
    }
    return failures == 0 ? 0 : 1;
}
