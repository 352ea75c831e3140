#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fewmode/convergence.hpp"
#include "fewmode/errors.hpp"
#include "fewmode/geometry.hpp"

namespace fewmode {

// One `key = value` line of a config document, in file order.
using KeyValueList = std::vector<std::pair<std::string, std::string>>;

// Round-trip decimal form (%.17g); config echoes, manifests, and CSV cells
// all print numbers through this.
std::string format_double(double value);

// How the level-shift matrix is computed. `automatic` picks the exact
// resolvent route for schroedinger and the quadrature route for the wave
// kinds, where no closed-form resolvent is available.
enum class GammaRoute { automatic, green, quadrature };

std::string to_string(GammaRoute route);
GammaRoute gamma_route_from_string(const std::string& name);

// Confined-mode selection: either an ordering rule plus a count, or an
// explicit ascending index list.
struct BasisConfig {
    double interval_min = 0.0;  // confined interval, defaults to the support
    double interval_max = 0.0;
    OrderingScheme ordering{OrderingKind::counting_up, ModeParity::any, 1};
    int count = 0;  // 0 selects no confined modes at all
    std::vector<int> explicit_modes;

    std::vector<int> resolve() const;
};

// Probe band. `points()` is the inclusive linear grid; a single-point grid
// sits at `min`.
struct GridConfig {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    int spatial_count = 1001;

    std::vector<double> points() const;
};

struct QuadratureConfig {
    double e_min = 0.05;
    int count = 12000;
    double e_max_factor = 10.0;
    double e_max = 0.0;  // absolute override when > 0
    GammaRoute route = GammaRoute::automatic;

    double resolved_e_max(double band_e_max) const;
};

struct AtomConfig {
    bool present = false;
    bool track_peak = false;  // atom.omega_a = resonant-with-peak
    double omega_a = 0.0;
    double dipole = 0.0;
    double position = 0.0;
};

struct DriveConfig {
    bool present = false;
    double amplitude = 0.0;
    int channel = 0;
};

struct SweepConfig {
    bool present = false;
    std::string parameter;
    std::vector<double> values;
};

struct OutputConfig {
    std::string stem = "run";
    std::optional<bool> oracle;  // default: emitted for runs without a drive

    bool emit_oracle(bool drive_present) const {
        return oracle.value_or(!drive_present);
    }
};

struct RunConfig {
    WaveKind kind = WaveKind::schroedinger;
    PotentialSpec geometry;
    BasisConfig basis;
    GridConfig grid;
    QuadratureConfig quadrature;
    AtomConfig atom;
    DriveConfig drive;
    SweepConfig sweep;
    OutputConfig outputs;
    // Canonical echo of every field that shaped the run, defaults included,
    // in a fixed order. Manifests start from this.
    KeyValueList resolved;
};

// Splits a document into ordered key/value pairs. Lines are `key = value`;
// `#` starts a comment, blank lines are skipped, assigning a key twice is an
// error. No typed validation happens here.
KeyValueList parse_key_values(const std::string& text);

// Replaces every literal `$sweep` with the value, printed with round-trip
// precision.
std::string substitute_sweep(std::string text, double value);

bool has_sweep(const KeyValueList& entries);

// Typed validation of the flat document. Throws ConfigError naming the
// offending key; any value still containing `$sweep` is rejected, so sweep
// documents must be substituted one value at a time first.
RunConfig build_config(const KeyValueList& entries);

RunConfig parse_config(const std::string& text);

}  // namespace fewmode
