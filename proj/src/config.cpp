#include "strand/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "strand/errors.hpp"
#include "strand/field_io.hpp"

namespace strand {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"grid", {"n_s", "n_t", "length", "duration", "bc"}},
        {"inertia", {"I", "K"}},
        {"potential", {"C", "D", "kappa", "c0"}},
        {"init", {"preset", "file"}},
        {"scheme", {"name", "reortho_every"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

double to_real(const std::string& tok, const std::string& key, int line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw ConfigError(key, line, "expected a finite real, got '" + tok + "'");
    }
    return v;
}

int to_int(const std::string& tok, const std::string& key, int line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ConfigError(key, line, "expected an integer, got '" + tok + "'");
    }
    return v;
}

class Entries {
public:
    void add(const std::string& key, Entry e) {
        if (map_.count(key)) throw ConfigError(key, e.line, "duplicate key");
        map_[key] = std::move(e);
    }
    bool has(const std::string& key) const { return map_.count(key) != 0; }
    const Entry& require(const std::string& key) const {
        const auto it = map_.find(key);
        if (it == map_.end()) throw ConfigError(key, 0, "missing mandatory key");
        return it->second;
    }
    std::optional<Entry> get(const std::string& key) const {
        const auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::map<std::string, Entry> map_;
};

// Checks one model parameter in isolation against otherwise valid defaults,
// so that the error names the key that is actually wrong.
template <class Set>
void check_param(const std::string& key, int line, Set set) {
    ModelParams probe;
    set(probe);
    try {
        probe.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(key, line, e.what());
    }
}

std::string matrix_text(const Mat3& m) {
    if (m.isDiagonal(0.0)) {
        return "diag " + format_real(m(0, 0)) + " " + format_real(m(1, 1)) + " " + format_real(m(2, 2));
    }
    std::string out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out += (out.empty() ? "" : " ") + format_real(m(i, j));
    }
    return out;
}

}  // namespace

Mat3 parse_matrix(const std::string& value, const std::string& key, int line) {
    const auto w = words(value);
    Mat3 m = Mat3::Zero();
    if (!w.empty() && w[0] == "diag") {
        if (w.size() != 4) throw ConfigError(key, line, "'diag' takes exactly three reals");
        for (int i = 0; i < 3; ++i) m(i, i) = to_real(w[1 + i], key, line);
        return m;
    }
    if (w.size() != 9) throw ConfigError(key, line, "expected nine reals (row-major) or 'diag a b c'");
    for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = to_real(w[k], key, line);
    return m;
}

SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    Entries entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line, lineno, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_keys().count(section)) throw ConfigError(section, lineno, "unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(section, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(key, lineno, "key outside any section");
        const std::string path = section + "." + key;
        if (!known_keys().at(section).count(key)) throw ConfigError(path, lineno, "unknown key");
        if (value.empty()) throw ConfigError(path, lineno, "empty value");
        entries.add(path, Entry{value, lineno});
    }

    SimConfig cfg;

    const Entry& n_s_e = entries.require("grid.n_s");
    const Entry& n_t_e = entries.require("grid.n_t");
    const Entry& len_e = entries.require("grid.length");
    const Entry& dur_e = entries.require("grid.duration");
    const Entry& bc_e = entries.require("grid.bc");
    const int n_s = to_int(n_s_e.value, "grid.n_s", n_s_e.line);
    const int n_t = to_int(n_t_e.value, "grid.n_t", n_t_e.line);
    const double length = to_real(len_e.value, "grid.length", len_e.line);
    const double duration = to_real(dur_e.value, "grid.duration", dur_e.line);
    if (n_s < 3) throw ConfigError("grid.n_s", n_s_e.line, "need at least 3 nodes");
    if (n_t < 3) throw ConfigError("grid.n_t", n_t_e.line, "need at least 3 nodes");
    if (length <= 0.0) throw ConfigError("grid.length", len_e.line, "must be positive");
    if (duration <= 0.0) throw ConfigError("grid.duration", dur_e.line, "must be positive");
    Boundary bc;
    try {
        bc = parse_boundary(bc_e.value);
    } catch (const StrandError& e) {
        throw ConfigError("grid.bc", bc_e.line, e.what());
    }
    const double ds = bc == Boundary::Periodic ? length / n_s : length / (n_s - 1);
    const double dt = duration / (n_t - 1);
    try {
        cfg.grid = Grid2::make(n_t, n_s, dt, ds, bc);
    } catch (const InvalidArgument& e) {
        throw ConfigError("grid", n_s_e.line, e.what());
    }

    const Entry& I_e = entries.require("inertia.I");
    const Entry& K_e = entries.require("inertia.K");
    const Entry& C_e = entries.require("potential.C");
    const Entry& D_e = entries.require("potential.D");
    const Entry& kappa_e = entries.require("potential.kappa");
    const Entry& c0_e = entries.require("potential.c0");
    ModelParams& p = cfg.params;
    p.inertia_body = parse_matrix(I_e.value, "inertia.I", I_e.line);
    p.inertia_rotor = parse_matrix(K_e.value, "inertia.K", K_e.line);
    p.pot_C = parse_matrix(C_e.value, "potential.C", C_e.line);
    p.pot_D = parse_matrix(D_e.value, "potential.D", D_e.line);
    p.pot_kappa = to_real(kappa_e.value, "potential.kappa", kappa_e.line);
    p.pot_c0 = to_real(c0_e.value, "potential.c0", c0_e.line);
    check_param("inertia.I", I_e.line, [&](ModelParams& q) { q.inertia_body = p.inertia_body; });
    check_param("inertia.K", K_e.line, [&](ModelParams& q) { q.inertia_rotor = p.inertia_rotor; });
    check_param("potential.C", C_e.line, [&](ModelParams& q) { q.pot_C = p.pot_C; });
    check_param("potential.D", D_e.line, [&](ModelParams& q) { q.pot_D = p.pot_D; });
    check_param("potential.kappa", kappa_e.line, [&](ModelParams& q) { q.pot_kappa = p.pot_kappa; });
    check_param("potential.c0", c0_e.line, [&](ModelParams& q) { q.pot_c0 = p.pot_c0; });

    const auto preset_e = entries.get("init.preset");
    const auto file_e = entries.get("init.file");
    if (preset_e && file_e) throw ConfigError("init.file", file_e->line, "give either preset or file, not both");
    if (!preset_e && !file_e) throw ConfigError("init", 0, "missing mandatory key preset or file");
    if (preset_e) {
        try {
            cfg.preset = parse_preset(preset_e->value);
        } catch (const StrandError& e) {
            throw ConfigError("init.preset", preset_e->line, e.what());
        }
    } else {
        const std::filesystem::path f(file_e->value);
        cfg.init_file = (f.is_relative() && !base_dir.empty() ? base_dir / f : f).string();
    }

    if (const auto e = entries.get("scheme.name")) {
        try {
            cfg.scheme = parse_scheme(e->value);
        } catch (const StrandError& err) {
            throw ConfigError("scheme.name", e->line, err.what());
        }
    }
    if (const auto e = entries.get("scheme.reortho_every")) {
        cfg.reortho_every = to_int(e->value, "scheme.reortho_every", e->line);
        if (cfg.reortho_every < 1) throw ConfigError("scheme.reortho_every", e->line, "must be >= 1");
    }

    if (dt > cfg.max_stable_dt() * (1.0 + 1e-12)) {
        throw ConfigError("grid.n_t", n_t_e.line,
                          "time step " + format_real(dt) + " exceeds the stability guard " +
                              format_real(cfg.max_stable_dt()) + "; increase n_t");
    }
    cfg.validate();
    return cfg;
}

SimConfig read_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const IoError& e) {
        throw ConfigError("", 0, e.what());
    }
    return parse_config(text, path.parent_path());
}

std::string echo_config(const SimConfig& cfg) {
    const Grid2& g = cfg.grid;
    std::string out;
    out += "[grid]\n";
    out += "n_s = " + std::to_string(g.n_s) + "\n";
    out += "n_t = " + std::to_string(g.n_t) + "\n";
    out += "length = " + format_real(g.length()) + "\n";
    out += "duration = " + format_real(g.duration()) + "\n";
    out += "bc = " + to_string(g.bc_s) + "\n";
    out += "\n[inertia]\n";
    out += "I = " + matrix_text(cfg.params.inertia_body) + "\n";
    out += "K = " + matrix_text(cfg.params.inertia_rotor) + "\n";
    out += "\n[potential]\n";
    out += "C = " + matrix_text(cfg.params.pot_C) + "\n";
    out += "D = " + matrix_text(cfg.params.pot_D) + "\n";
    out += "kappa = " + format_real(cfg.params.pot_kappa) + "\n";
    out += "c0 = " + format_real(cfg.params.pot_c0) + "\n";
    out += "\n[init]\n";
    if (cfg.init_file.empty()) {
        out += "preset = " + to_string(cfg.preset) + "\n";
    } else {
        out += "file = " + cfg.init_file + "\n";
    }
    out += "\n[scheme]\n";
    out += "name = " + to_string(cfg.scheme) + "\n";
    out += "reortho_every = " + std::to_string(cfg.reortho_every) + "\n";
    return out;
}

}  // namespace strand
