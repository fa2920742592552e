#include "pgg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pgg {

std::string format_real(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
    char buf[128];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

double parse_real(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("'" + std::string(text) + "' is not a real number");
    return value;
}

std::int64_t parse_integer(std::string_view text) {
    text = trim(text);
    std::int64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("'" + std::string(text) + "' is not an integer");
    return value;
}

std::uint64_t parse_unsigned(std::string_view text) {
    text = trim(text);
    std::uint64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("'" + std::string(text) + "' is not an unsigned 64-bit integer");
    return value;
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> values;
    for (auto part : split(text, ',')) values.push_back(parse_real(part));
    return values;
}

// --- CSV ------------------------------------------------------------------

void write_run_csv(const RunResult& run, std::ostream& out) {
    out << kRunCsvHeader << '\n';
    for (const auto& rec : run.records)
        out << rec.generation << ',' << format_real(rec.mean_p_C) << ',' << format_real(rec.mean_p_AC) << ','
            << format_real(rec.coop_frequency) << '\n';
}

void write_run_csv(const RunResult& run, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_run_csv(run, out);
    finish(out, path);
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    const auto& cfg = result.config;
    out << kSweepCsvHeader << '\n';
    for (std::size_t rho = 0; rho < cfg.rho_values.size(); ++rho) {
        const auto& critical = result.critical_points.at(rho).r_critical;
        const std::string critical_text = critical ? format_real(*critical) : std::string();
        for (std::size_t r = 0; r < cfg.r_values.size(); ++r) {
            const auto& c = result.cell(rho, r);
            out << to_string(cfg.base.policy) << ',' << cfg.base.k << ',' << format_real(c.r) << ','
                << format_real(c.rho_A) << ',' << c.replicate_count << ',' << format_real(c.mean_p_C) << ','
                << format_real(c.sd_p_C) << ',' << format_real(c.mean_p_AC) << ',' << format_real(c.sd_p_AC) << ','
                << format_real(c.mean_coop_frequency) << ',' << critical_text << '\n';
        }
    }
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_sweep_csv(result, out);
    finish(out, path);
}

void write_sweep_json(const SweepResult& result, const std::filesystem::path& path) {
    using nlohmann::json;
    const auto& cfg = result.config;
    json doc;
    doc["config"] = {
        {"policy", std::string(to_string(cfg.base.policy))},
        {"k", cfg.base.k},
        {"mu", cfg.base.mu},
        {"generations", cfg.base.generations},
        {"grid_width", cfg.base.grid_width},
        {"grid_height", cfg.base.grid_height},
        {"games_per_focal", cfg.base.focal_games()},
        {"fitness_shift", cfg.base.shift()},
        {"init", std::string(to_string(cfg.base.init))},
        {"mimic_mode", std::string(to_string(cfg.base.mimic_mode))},
        {"r_values", cfg.r_values},
        {"rho_values", cfg.rho_values},
        {"replicates", cfg.replicates},
        {"master_seed", cfg.master_seed},
        {"threshold", cfg.threshold},
        {"convergence_fraction", cfg.convergence_fraction},
    };
    json cells = json::array();
    for (const auto& c : result.cells)
        cells.push_back({{"r", c.r},
                         {"rho_A", c.rho_A},
                         {"replicates", c.replicate_count},
                         {"mean_p_C", c.mean_p_C},
                         {"sd_p_C", c.sd_p_C},
                         {"mean_p_AC", c.mean_p_AC},
                         {"sd_p_AC", c.sd_p_AC},
                         {"mean_coop_freq", c.mean_coop_frequency}});
    doc["cells"] = std::move(cells);
    json critical = json::array();
    for (const auto& cp : result.critical_points)
        critical.push_back({{"rho_A", cp.rho_A},
                            {"r_critical", cp.r_critical ? json(*cp.r_critical) : json(nullptr)}});
    doc["critical_points"] = std::move(critical);

    auto out = open_for_write(path);
    out << doc.dump(2) << '\n';
    finish(out, path);
}

std::vector<SweepCsvRow> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError("empty sweep CSV (missing header)");
    if (trim(line) != kSweepCsvHeader) throw CsvError("line 1: unexpected header '" + std::string(trim(line)) + "'");

    std::vector<SweepCsvRow> rows;
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line), ',');
        if (fields.size() != 11)
            throw CsvError("line " + std::to_string(number) + ": expected 11 fields, got " +
                           std::to_string(fields.size()));
        try {
            SweepCsvRow row;
            row.policy = std::string(trim(fields[0]));
            row.k = static_cast<int>(parse_integer(fields[1]));
            row.r = parse_real(fields[2]);
            row.rho_A = parse_real(fields[3]);
            row.replicates = static_cast<int>(parse_integer(fields[4]));
            row.mean_p_C = parse_real(fields[5]);
            row.sd_p_C = parse_real(fields[6]);
            row.mean_p_AC = parse_real(fields[7]);
            row.sd_p_AC = parse_real(fields[8]);
            row.mean_coop_freq = parse_real(fields[9]);
            if (!trim(fields[10]).empty()) row.r_critical = parse_real(fields[10]);
            rows.push_back(std::move(row));
        } catch (const std::invalid_argument& e) {
            throw CsvError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return rows;
}

std::vector<SweepCsvRow> read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open '" + path.string() + "'");
    return read_sweep_csv(in);
}

// --- key=value configuration ---------------------------------------------

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = {
        "policy",      "k",          "mu",         "generations", "grid_width",
        "grid_height", "games_per_focal", "r_values", "rho_values", "replicates",
        "master_seed", "parallelism", "init",      "mimic_mode",  "fitness_shift",
        "threshold",   "convergence_fraction", "series_dir",
    };
    return keys;
}

ConfigEntries parse_config_entries(std::string_view text) {
    ConfigEntries entries;
    const auto& keys = config_keys();
    int number = 0;
    for (auto raw : split(text, '\n')) {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("", number, "expected key=value, got '" + std::string(line) + "'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("", number, "missing key before '='");
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(std::string(key), number, "unknown key '" + std::string(key) + "'");
        entries[std::string(key)] = ConfigEntry{std::string(value), number};
    }
    return entries;
}

namespace {

class EntryReader {
public:
    explicit EntryReader(const ConfigEntries& entries) : entries_(entries) {}

    const ConfigEntry* find(std::string_view key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    int line_of(std::string_view key) const {
        const auto* e = find(key);
        return e ? e->line : 0;
    }

    [[noreturn]] void fail(std::string_view key, const std::string& message) const {
        const int line = line_of(key);
        const std::string name = line == 0 ? "--" + std::string(key) : std::string(key);
        throw ConfigError(std::string(key), line, name + ": " + message);
    }

    template <class F>
    auto read(std::string_view key, F&& convert) const -> std::optional<decltype(convert(std::string_view{}))> {
        const auto* e = find(key);
        if (!e) return std::nullopt;
        try {
            return convert(std::string_view(e->value));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            fail(key, ex.what());
        }
    }

    std::optional<int> integer(std::string_view key, int min) const {
        auto v = read(key, [](std::string_view s) { return parse_integer(s); });
        if (!v) return std::nullopt;
        if (*v < min || *v > std::numeric_limits<int>::max())
            fail(key, "value " + std::to_string(*v) + " must be >= " + std::to_string(min));
        return static_cast<int>(*v);
    }

    std::optional<double> real(std::string_view key, double lo, double hi, bool lo_open = false) const {
        auto v = read(key, [](std::string_view s) { return parse_real(s); });
        if (!v) return std::nullopt;
        check_range(key, *v, lo, hi, lo_open);
        return v;
    }

    std::optional<std::vector<double>> list(std::string_view key, double lo, double hi, bool lo_open = false) const {
        auto v = read(key, [](std::string_view s) { return parse_real_list(s); });
        if (!v) return std::nullopt;
        for (double x : *v) check_range(key, x, lo, hi, lo_open);
        return v;
    }

private:
    void check_range(std::string_view key, double v, double lo, double hi, bool lo_open) const {
        const bool ok = std::isfinite(v) && (lo_open ? v > lo : v >= lo) && v <= hi;
        if (!ok) {
            const std::string bounds = (lo_open ? "(" : "[") + format_real(lo) + "," +
                                       (std::isinf(hi) ? std::string("inf)") : format_real(hi) + "]");
            fail(key, "value " + format_real(v) + " out of " + bounds);
        }
    }

    const ConfigEntries& entries_;
};

// Maps a SimParams/SweepConfig validation field to the config key that sets it.
std::string_view key_for_field(std::string_view field) {
    if (field == "r") return "r_values";
    if (field == "rho_A") return "rho_values";
    if (field == "grid" || field == "population_size") return "grid_width";
    return field;
}

}  // namespace

SweepConfig build_sweep_config(const ConfigEntries& entries) {
    const EntryReader in(entries);
    constexpr double inf = std::numeric_limits<double>::infinity();
    SweepConfig cfg;
    SimParams& base = cfg.base;

    if (auto v = in.read("policy", [](std::string_view s) { return parse_policy(s); })) base.policy = *v;
    else throw ConfigError("policy", 0, "missing required key 'policy'");
    if (auto v = in.integer("k", 1)) base.k = *v;
    if (auto v = in.real("mu", 0.0, 1.0)) base.mu = *v;
    if (auto v = in.integer("generations", 1)) base.generations = *v;
    const int width = in.integer("grid_width", 1).value_or(kDefaultGridSide);
    const int height = in.integer("grid_height", 1).value_or(kDefaultGridSide);
    base.with_grid(width, height);
    if (auto v = in.integer("games_per_focal", 1)) base.games_per_focal = *v;
    if (auto v = in.read("init", [](std::string_view s) { return parse_init_mode(s); })) base.init = *v;
    if (auto v = in.read("mimic_mode", [](std::string_view s) { return parse_mimic_mode(s); })) base.mimic_mode = *v;
    if (auto v = in.real("fitness_shift", -inf, inf)) base.fitness_shift = *v;

    if (auto v = in.list("r_values", 0.0, inf, true)) cfg.r_values = std::move(*v);
    else throw ConfigError("r_values", 0, "missing required key 'r_values'");
    cfg.rho_values = in.list("rho_values", 0.0, 1.0).value_or(std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    if (auto v = in.integer("replicates", 1)) cfg.replicates = *v;
    if (auto v = in.read("master_seed", [](std::string_view s) { return parse_unsigned(s); })) cfg.master_seed = *v;
    if (auto v = in.integer("parallelism", 1)) cfg.parallelism = *v;
    if (auto v = in.real("threshold", -inf, inf)) cfg.threshold = *v;
    if (auto v = in.real("convergence_fraction", 0.0, 1.0, true)) cfg.convergence_fraction = *v;
    if (const auto* e = in.find("series_dir"); e && !e->value.empty()) cfg.series_dir = e->value;

    try {
        return validate_sweep_config(cfg);
    } catch (const ValidationError& e) {
        const auto key = key_for_field(e.field());
        throw ConfigError(std::string(key), in.line_of(key), e.what());
    }
}

SweepConfig parse_config(std::string_view text) { return build_sweep_config(parse_config_entries(text)); }

}  // namespace pgg
