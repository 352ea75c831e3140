#include "fewmode/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fewmode {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_whitespace(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(':', pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t idx = 0;
        const double v = std::stod(s, &idx);
        if (idx != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a finite number, got '" + s + "'");
    }
}

int parse_int(const std::string& key, const std::string& s) {
    try {
        std::size_t idx = 0;
        const int v = std::stoi(s, &idx);
        if (idx != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + s + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

// Consumes keys out of the flat document and remembers which were touched,
// so leftovers can be reported as unknown.
class KeyReader {
public:
    explicit KeyReader(const KeyValueList& entries) : entries_(entries) {
        used_.assign(entries.size(), false);
    }

    const std::string* find(const std::string& key) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].first == key) {
                used_[i] = true;
                return &entries_[i].second;
            }
        }
        return nullptr;
    }

    bool block_present(const std::string& prefix) const {
        for (const auto& [key, value] : entries_)
            if (key.rfind(prefix, 0) == 0) return true;
        return false;
    }

    const std::string& require(const std::string& key) {
        const std::string* v = find(key);
        if (v == nullptr) throw ConfigError(key + ": missing required key");
        return *v;
    }

    void finish() const {
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (!used_[i]) throw ConfigError(entries_[i].first + ": unknown key");
    }

private:
    const KeyValueList& entries_;
    std::vector<bool> used_;
};

std::vector<double> parse_sweep_values(const std::string& key, const std::string& text) {
    const auto toks = split_whitespace(text);
    if (toks.size() == 1 &&
        (toks[0].rfind("lin:", 0) == 0 || toks[0].rfind("log:", 0) == 0)) {
        const auto parts = split_colon(toks[0]);
        if (parts.size() != 4)
            throw ConfigError(key + ": expected " + parts[0] + ":min:max:count");
        const double lo = parse_double(key, parts[1]);
        const double hi = parse_double(key, parts[2]);
        const int count = parse_int(key, parts[3]);
        if (count < 1) throw ConfigError(key + ": count must be at least 1");
        const bool log = parts[0] == "log";
        if (log && (lo <= 0.0 || hi <= 0.0))
            throw ConfigError(key + ": log range requires positive endpoints");
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double t = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
            values.push_back(log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
        return values;
    }
    std::vector<double> values;
    values.reserve(toks.size());
    for (const auto& tok : toks) values.push_back(parse_double(key, tok));
    if (values.empty()) throw ConfigError(key + ": no values given");
    return values;
}

}  // namespace

std::string to_string(GammaRoute route) {
    switch (route) {
        case GammaRoute::automatic: return "auto";
        case GammaRoute::green: return "green";
        case GammaRoute::quadrature: return "quadrature";
    }
    throw std::logic_error("unreachable gamma route");
}

GammaRoute gamma_route_from_string(const std::string& name) {
    if (name == "auto") return GammaRoute::automatic;
    if (name == "green") return GammaRoute::green;
    if (name == "quadrature") return GammaRoute::quadrature;
    throw std::invalid_argument("gamma route '" + name +
                                "' (expected auto, green, or quadrature)");
}

std::vector<int> BasisConfig::resolve() const {
    if (!explicit_modes.empty()) return explicit_modes;
    if (count == 0) return {};
    return mode_sequence(ordering, count);
}

std::vector<double> GridConfig::points() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        out.push_back(min + (max - min) * t);
    }
    return out;
}

double QuadratureConfig::resolved_e_max(double band_e_max) const {
    if (e_max > 0.0) return e_max;
    return e_max_factor * band_e_max;
}

KeyValueList parse_key_values(const std::string& text) {
    KeyValueList out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": missing key");
        if (value.empty()) throw ConfigError(key + ": empty value");
        for (const auto& [seen, unused] : out)
            if (seen == key) throw ConfigError(key + ": assigned twice");
        out.emplace_back(key, value);
    }
    return out;
}

std::string substitute_sweep(std::string text, double value) {
    const std::string needle = "$sweep";
    const std::string repl = format_double(value);
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), repl);
        pos += repl.size();
    }
    return text;
}

bool has_sweep(const KeyValueList& entries) {
    for (const auto& [key, value] : entries)
        if (key.rfind("sweep.", 0) == 0) return true;
    return false;
}

RunConfig build_config(const KeyValueList& entries) {
    for (const auto& [key, value] : entries)
        if (value.find("$sweep") != std::string::npos)
            throw ConfigError(key + ": unresolved $sweep placeholder (run as a sweep)");

    KeyReader reader(entries);
    RunConfig cfg;

    try {
        cfg.kind = wave_kind_from_string(reader.require("run.kind"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("run.kind: ") + e.what());
    }

    cfg.geometry.kind = cfg.kind;
    cfg.geometry.support_min = 0.0;
    cfg.geometry.support_max = 1.0;
    if (const auto* v = reader.find("geometry.support_min"))
        cfg.geometry.support_min = parse_double("geometry.support_min", *v);
    if (const auto* v = reader.find("geometry.support_max"))
        cfg.geometry.support_max = parse_double("geometry.support_max", *v);
    if (const auto* v = reader.find("geometry.deltas")) {
        for (const auto& tok : split_whitespace(*v)) {
            const auto parts = split_colon(tok);
            if (parts.size() != 2)
                throw ConfigError("geometry.deltas: expected position:strength, got '" +
                                  tok + "'");
            cfg.geometry.deltas.push_back({parse_double("geometry.deltas", parts[0]),
                                           parse_double("geometry.deltas", parts[1])});
        }
    }
    if (const auto* v = reader.find("geometry.layers")) {
        for (const auto& tok : split_whitespace(*v)) {
            const auto parts = split_colon(tok);
            if (parts.size() != 3 ||
                (parts[2].rfind("n=", 0) != 0 && parts[2].rfind("eps=", 0) != 0))
                throw ConfigError(
                    "geometry.layers: expected start:end:n=X or start:end:eps=X, got '" +
                    tok + "'");
            Layer layer;
            layer.start = parse_double("geometry.layers", parts[0]);
            layer.end = parse_double("geometry.layers", parts[1]);
            if (parts[2].rfind("n=", 0) == 0) {
                layer.refractive_index = parse_double("geometry.layers", parts[2].substr(2));
            } else {
                const double eps = parse_double("geometry.layers", parts[2].substr(4));
                if (eps <= 0.0)
                    throw ConfigError("geometry.layers: eps must be positive in '" + tok +
                                      "'");
                layer.refractive_index = std::sqrt(eps);
            }
            cfg.geometry.layers.push_back(layer);
        }
    }
    try {
        validate(cfg.geometry);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    cfg.basis.interval_min = cfg.geometry.support_min;
    cfg.basis.interval_max = cfg.geometry.support_max;
    if (const auto* v = reader.find("basis.interval_min"))
        cfg.basis.interval_min = parse_double("basis.interval_min", *v);
    if (const auto* v = reader.find("basis.interval_max"))
        cfg.basis.interval_max = parse_double("basis.interval_max", *v);
    if (!(cfg.geometry.support_min <= cfg.basis.interval_min &&
          cfg.basis.interval_min < cfg.basis.interval_max &&
          cfg.basis.interval_max <= cfg.geometry.support_max))
        throw ConfigError("basis.interval_min: confined interval must be ordered and "
                          "inside the support");

    const bool has_explicit = reader.block_present("basis.modes");
    if (const auto* v = reader.find("basis.modes")) {
        for (const auto& tok : split_whitespace(*v)) {
            const int idx = parse_int("basis.modes", tok);
            if (idx < 1) throw ConfigError("basis.modes: indices start at 1");
            if (!cfg.basis.explicit_modes.empty() && idx <= cfg.basis.explicit_modes.back())
                throw ConfigError("basis.modes: indices must be strictly ascending");
            cfg.basis.explicit_modes.push_back(idx);
        }
        if (cfg.basis.explicit_modes.empty())
            throw ConfigError("basis.modes: no indices given");
    }
    const char* ordering_keys[] = {"basis.scheme", "basis.parity", "basis.dominant",
                                   "basis.count"};
    for (const char* key : ordering_keys)
        if (has_explicit && reader.block_present(key))
            throw ConfigError(std::string(key) + ": cannot be combined with basis.modes");
    if (const auto* v = reader.find("basis.scheme")) {
        try {
            cfg.basis.ordering.kind = ordering_kind_from_string(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("basis.scheme: ") + e.what());
        }
    }
    if (const auto* v = reader.find("basis.parity")) {
        try {
            cfg.basis.ordering.parity = mode_parity_from_string(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("basis.parity: ") + e.what());
        }
    }
    if (const auto* v = reader.find("basis.dominant"))
        cfg.basis.ordering.dominant = parse_int("basis.dominant", *v);
    if (const auto* v = reader.find("basis.count")) {
        cfg.basis.count = parse_int("basis.count", *v);
        if (cfg.basis.count < 0) throw ConfigError("basis.count: must be non-negative");
    }
    try {
        (void)cfg.basis.resolve();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("basis.count: ") + e.what());
    }

    cfg.grid.min = parse_double("grid.min", reader.require("grid.min"));
    cfg.grid.max = parse_double("grid.max", reader.require("grid.max"));
    cfg.grid.count = parse_int("grid.count", reader.require("grid.count"));
    if (!(cfg.grid.min > 0.0)) throw ConfigError("grid.min: must be positive");
    if (cfg.grid.count < 1) throw ConfigError("grid.count: must be at least 1");
    if (cfg.grid.count == 1) {
        if (!(cfg.grid.max >= cfg.grid.min))
            throw ConfigError("grid.max: must be at least grid.min");
    } else if (!(cfg.grid.max > cfg.grid.min)) {
        throw ConfigError("grid.max: must exceed grid.min");
    }
    if (const auto* v = reader.find("grid.spatial_count")) {
        cfg.grid.spatial_count = parse_int("grid.spatial_count", *v);
        if (cfg.grid.spatial_count < 2)
            throw ConfigError("grid.spatial_count: must be at least 2");
    }

    if (const auto* v = reader.find("quadrature.e_min")) {
        cfg.quadrature.e_min = parse_double("quadrature.e_min", *v);
        if (!(cfg.quadrature.e_min > 0.0))
            throw ConfigError("quadrature.e_min: must be positive");
    }
    if (const auto* v = reader.find("quadrature.count")) {
        cfg.quadrature.count = parse_int("quadrature.count", *v);
        if (cfg.quadrature.count < 4)
            throw ConfigError("quadrature.count: must be at least 4");
    }
    if (const auto* v = reader.find("quadrature.e_max_factor")) {
        cfg.quadrature.e_max_factor = parse_double("quadrature.e_max_factor", *v);
        if (!(cfg.quadrature.e_max_factor > 1.0))
            throw ConfigError("quadrature.e_max_factor: must exceed 1");
    }
    if (const auto* v = reader.find("quadrature.e_max")) {
        cfg.quadrature.e_max = parse_double("quadrature.e_max", *v);
        if (!(cfg.quadrature.e_max > 0.0))
            throw ConfigError("quadrature.e_max: must be positive");
    }
    if (const auto* v = reader.find("quadrature.route")) {
        try {
            cfg.quadrature.route = gamma_route_from_string(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("quadrature.route: ") + e.what());
        }
    }
    if (cfg.quadrature.route == GammaRoute::green && cfg.kind != WaveKind::schroedinger)
        throw ConfigError("quadrature.route: the resolvent route needs schroedinger");

    cfg.atom.present = reader.block_present("atom.");
    if (cfg.atom.present) {
        if (cfg.kind == WaveKind::schroedinger)
            throw ConfigError("atom.omega_a: an atom requires maxwell_rwa or sve");
        const std::string& omega = reader.require("atom.omega_a");
        if (omega == "resonant-with-peak") {
            cfg.atom.track_peak = true;
        } else {
            cfg.atom.omega_a = parse_double("atom.omega_a", omega);
            if (!(cfg.atom.omega_a > 0.0))
                throw ConfigError("atom.omega_a: must be positive");
        }
        cfg.atom.dipole = parse_double("atom.dipole", reader.require("atom.dipole"));
        if (cfg.atom.dipole == 0.0) throw ConfigError("atom.dipole: must be nonzero");
        cfg.atom.position = parse_double("atom.position", reader.require("atom.position"));
        if (!(cfg.basis.interval_min < cfg.atom.position &&
              cfg.atom.position < cfg.basis.interval_max))
            throw ConfigError("atom.position: outside the confined interval");
    }

    cfg.drive.present = reader.block_present("drive.");
    if (cfg.drive.present) {
        if (!cfg.atom.present)
            throw ConfigError("drive.amplitude: a drive requires an atom block");
        cfg.drive.amplitude =
            parse_double("drive.amplitude", reader.require("drive.amplitude"));
        if (!(cfg.drive.amplitude > 0.0))
            throw ConfigError("drive.amplitude: must be positive");
        if (const auto* v = reader.find("drive.channel")) {
            cfg.drive.channel = parse_int("drive.channel", *v);
            if (cfg.drive.channel != 0 && cfg.drive.channel != 1)
                throw ConfigError("drive.channel: must be 0 or 1");
        }
    }

    cfg.sweep.present = has_sweep(entries);
    if (cfg.sweep.present) {
        cfg.sweep.parameter = reader.require("sweep.parameter");
        cfg.sweep.values =
            parse_sweep_values("sweep.values", reader.require("sweep.values"));
    }

    if (const auto* v = reader.find("outputs.stem")) {
        cfg.outputs.stem = *v;
        if (cfg.outputs.stem.find('/') != std::string::npos ||
            cfg.outputs.stem.find("..") != std::string::npos)
            throw ConfigError("outputs.stem: must be a bare file stem");
    }
    if (const auto* v = reader.find("outputs.oracle"))
        cfg.outputs.oracle = parse_bool("outputs.oracle", *v);

    reader.finish();

    // canonical echo, defaults included
    auto& res = cfg.resolved;
    res.emplace_back("run.kind", to_string(cfg.kind));
    res.emplace_back("geometry.support_min", format_double(cfg.geometry.support_min));
    res.emplace_back("geometry.support_max", format_double(cfg.geometry.support_max));
    if (!cfg.geometry.deltas.empty()) {
        std::string acc;
        for (const auto& d : cfg.geometry.deltas) {
            if (!acc.empty()) acc += ' ';
            acc += format_double(d.position) + ":" + format_double(d.strength);
        }
        res.emplace_back("geometry.deltas", acc);
    }
    if (!cfg.geometry.layers.empty()) {
        std::string acc;
        for (const auto& l : cfg.geometry.layers) {
            if (!acc.empty()) acc += ' ';
            acc += format_double(l.start) + ":" + format_double(l.end) +
                   ":n=" + format_double(l.refractive_index);
        }
        res.emplace_back("geometry.layers", acc);
    }
    res.emplace_back("basis.interval_min", format_double(cfg.basis.interval_min));
    res.emplace_back("basis.interval_max", format_double(cfg.basis.interval_max));
    if (!cfg.basis.explicit_modes.empty()) {
        std::string acc;
        for (int idx : cfg.basis.explicit_modes) {
            if (!acc.empty()) acc += ' ';
            acc += std::to_string(idx);
        }
        res.emplace_back("basis.modes", acc);
    } else {
        res.emplace_back("basis.scheme", to_string(cfg.basis.ordering.kind));
        res.emplace_back("basis.parity", to_string(cfg.basis.ordering.parity));
        res.emplace_back("basis.dominant", std::to_string(cfg.basis.ordering.dominant));
        res.emplace_back("basis.count", std::to_string(cfg.basis.count));
    }
    {
        const auto modes = cfg.basis.resolve();
        std::string acc;
        for (int idx : modes) {
            if (!acc.empty()) acc += ' ';
            acc += std::to_string(idx);
        }
        res.emplace_back("basis.resolved_modes", modes.empty() ? "none" : acc);
    }
    res.emplace_back("grid.min", format_double(cfg.grid.min));
    res.emplace_back("grid.max", format_double(cfg.grid.max));
    res.emplace_back("grid.count", std::to_string(cfg.grid.count));
    res.emplace_back("grid.spatial_count", std::to_string(cfg.grid.spatial_count));
    res.emplace_back("quadrature.e_min", format_double(cfg.quadrature.e_min));
    res.emplace_back("quadrature.count", std::to_string(cfg.quadrature.count));
    res.emplace_back("quadrature.e_max_factor",
                     format_double(cfg.quadrature.e_max_factor));
    if (cfg.quadrature.e_max > 0.0)
        res.emplace_back("quadrature.e_max", format_double(cfg.quadrature.e_max));
    res.emplace_back("quadrature.route", to_string(cfg.quadrature.route));
    if (cfg.atom.present) {
        res.emplace_back("atom.omega_a", cfg.atom.track_peak
                                             ? std::string("resonant-with-peak")
                                             : format_double(cfg.atom.omega_a));
        res.emplace_back("atom.dipole", format_double(cfg.atom.dipole));
        res.emplace_back("atom.position", format_double(cfg.atom.position));
    }
    if (cfg.drive.present) {
        res.emplace_back("drive.amplitude", format_double(cfg.drive.amplitude));
        res.emplace_back("drive.channel", std::to_string(cfg.drive.channel));
    }
    if (cfg.sweep.present) {
        res.emplace_back("sweep.parameter", cfg.sweep.parameter);
        std::string acc;
        for (double v : cfg.sweep.values) {
            if (!acc.empty()) acc += ' ';
            acc += format_double(v);
        }
        res.emplace_back("sweep.values", acc);
    }
    res.emplace_back("outputs.stem", cfg.outputs.stem);
    res.emplace_back("outputs.oracle",
                     cfg.outputs.emit_oracle(cfg.drive.present) ? "true" : "false");
    return cfg;
}

RunConfig parse_config(const std::string& text) {
    return build_config(parse_key_values(text));
}

}  // namespace fewmode
