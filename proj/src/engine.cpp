#include "fewmode/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fewmode/bath.hpp"
#include "fewmode/errors.hpp"
#include "fewmode/modes.hpp"

namespace fewmode {

namespace {

// Runs body(0..n-1) across `threads` workers. Indices are claimed through an
// atomic counter but results land wherever the body writes them, so the
// output cannot depend on the schedule. The lowest-index exception wins,
// which matches what a serial loop would have thrown first.
void parallel_for(int threads, std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto drain = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

struct LineScan {
    std::vector<double> x;
    std::vector<double> y;  // reference |t|^2
    std::size_t peak = 0;
};

LineScan scan_reference(const PotentialSpec& spec, double lo, double hi, std::size_t count) {
    LineScan s;
    s.x.resize(count);
    s.y.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        s.x[i] = x;
        s.y[i] = std::norm(
            transfer_matrix_oracle(spec, grid_energy(spec.kind, x)).transmission());
        if (s.y[i] > s.y[s.peak]) s.peak = i;
    }
    return s;
}

// Vertex of the parabola through the best node and its neighbours; falls
// back to the node itself at the edges or when the scan is locally flat.
double refine_vertex(const LineScan& s) {
    const std::size_t p = s.peak;
    if (p == 0 || p + 1 >= s.x.size()) return s.x[p];
    const double d2 = s.y[p - 1] - 2.0 * s.y[p] + s.y[p + 1];
    if (!(d2 < 0.0)) return s.x[p];
    const double h = s.x[p + 1] - s.x[p];
    return s.x[p] + 0.5 * h * (s.y[p - 1] - s.y[p + 1]) / d2;
}

// Full width of the scanned line at half depth between its extremes.
// Infinity when the scan shows no peak or the flanks stay above half level,
// both of which mean the window failed to isolate a line.
double line_width(const LineScan& s) {
    const double ymax = s.y[s.peak];
    const double ymin = *std::min_element(s.y.begin(), s.y.end());
    if (!(ymax - ymin > 1e-9)) return std::numeric_limits<double>::infinity();
    const double half = 0.5 * (ymax + ymin);
    double left = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = s.peak; j-- > 0;) {
        if (s.y[j] < half) {
            left = s.x[j] + (s.x[j + 1] - s.x[j]) * (half - s.y[j]) / (s.y[j + 1] - s.y[j]);
            break;
        }
    }
    double right = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = s.peak + 1; j < s.y.size(); ++j) {
        if (s.y[j] < half) {
            right = s.x[j - 1] +
                    (s.x[j] - s.x[j - 1]) * (half - s.y[j - 1]) / (s.y[j] - s.y[j - 1]);
            break;
        }
    }
    if (std::isnan(left) || std::isnan(right)) return std::numeric_limits<double>::infinity();
    return right - left;
}

// Copies the slice of a scan within +-span of index j, re-locating the peak.
LineScan slice_scan(const LineScan& scan, std::size_t j, std::size_t span) {
    const std::size_t lo = j > span ? j - span : 0;
    const std::size_t hi = std::min(scan.x.size(), j + span + 1);
    LineScan s;
    s.x.assign(scan.x.begin() + static_cast<std::ptrdiff_t>(lo),
               scan.x.begin() + static_cast<std::ptrdiff_t>(hi));
    s.y.assign(scan.y.begin() + static_cast<std::ptrdiff_t>(lo),
               scan.y.begin() + static_cast<std::ptrdiff_t>(hi));
    s.peak = j - lo;
    return s;
}

// Samples a refinement cluster across one resonance line of the structure.
// Each line drags a zero/peak pair through every coupling row, so the node
// set must resolve every line inside the integration range, basis member or
// not. The line is located and sized from the reference transmission; a
// line wider than a fair fraction of the line spacing needs no cluster
// because the band window and global ladder already resolve it.
void add_line_cluster(const PotentialSpec& spec, const LineScan& global, std::size_t j,
                      double fsr, double omega_min, double omega_max,
                      std::vector<double>& energies) {
    double step = global.x[1] - global.x[0];
    LineScan scan = slice_scan(global, j, static_cast<std::size_t>(0.45 * fsr / step) + 1);
    double width = line_width(scan);
    for (int round = 0; round < 3 && width < 5.0 * step; ++round) {
        // needle compared to the scan step: re-center and zoom
        const double center = scan.x[scan.peak];
        const double rlo = std::max(omega_min, center - 5.0 * step);
        const double rhi = std::min(omega_max, center + 5.0 * step);
        if (!(rhi > rlo)) return;
        scan = scan_reference(spec, rlo, rhi, 257);
        width = line_width(scan);
        step = (rhi - rlo) / 256.0;
    }
    if (!(width > 0.0) || !(width < 0.3 * fsr)) return;
    const double center = refine_vertex(scan);
    const double clo = std::max(omega_min, center - 6.0 * width);
    const double chi = std::min(omega_max, center + 6.0 * width);
    if (!(chi > clo)) return;
    const int count =
        std::max(2, static_cast<int>(std::ceil((chi - clo) / (width / 8.0))) + 1);
    for (int i = 0; i < count; ++i) {
        const double w = clo + (chi - clo) * i / (count - 1.0);
        energies.push_back(0.5 * w * w);
    }
}

LevelShiftMatrix empty_level_shift(WaveKind kind, double energy) {
    LevelShiftMatrix ls;
    ls.energy = energy;
    ls.kind = kind;
    ls.gamma = Eigen::MatrixXcd::Zero(0, 0);
    return ls;
}

// Reference transmission for the oracle column. The permittivity-layer
// reference diverges at the bare emitter line; its two-sided limit there is
// total reflection, so that value is pinned instead of evaluated.
double reference_t2(const PotentialSpec& spec, const AtomSpec* atom, double energy) {
    if (atom != nullptr) {
        const double omega = dispersion_from_energy(energy).omega;
        if (std::abs(omega - atom->omega_a) <= 1e-9 * std::max(1.0, std::abs(atom->omega_a)))
            return 0.0;
        return std::norm(linear_dispersion_oracle(spec, *atom, energy).transmission());
    }
    return std::norm(transfer_matrix_oracle(spec, energy).transmission());
}

SolverError annotate_grid_point(const SolverError& err, std::size_t index, double value) {
    return SolverError(std::string(err.what()) + " at grid point " + std::to_string(index) +
                       " (grid value " + format_double(value) + ")");
}

// Shared context for the per-point pipelines.
struct RunSetup {
    SystemBasis basis;
    std::vector<double> axis;
    std::vector<double> probes;
    GammaRoute route = GammaRoute::green;
    CouplingTable table;
    SpatialGrid sgrid{};
    AtomSpec atom;
    AtomCouplings g;
    double omega_a = 0.0;
};

RunSetup prepare_run(const RunConfig& cfg, int threads) {
    SystemBasis basis = dirichlet_modes(cfg.geometry, cfg.basis.interval_min,
                                        cfg.basis.interval_max, cfg.basis.resolve());
    std::vector<double> axis = cfg.grid.points();
    std::vector<double> probes(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) probes[i] = grid_energy(cfg.kind, axis[i]);
    const GammaRoute route = resolve_gamma_route(cfg.kind, cfg.quadrature.route);
    CouplingTable table;
    if (route == GammaRoute::quadrature && basis.size() > 0)
        table = build_coupling_table(cfg.geometry, basis, cfg.quadrature, probes, threads);
    // The coupling row and background factor come from the analytic matching
    // solve, so outside the resolvent route two spatial samples suffice.
    const int spatial = route == GammaRoute::green ? cfg.grid.spatial_count : 2;
    const SpatialGrid sgrid{cfg.geometry.support_min, cfg.geometry.support_max, spatial};
    AtomSpec atom;
    AtomCouplings g;
    double omega_a = 0.0;
    if (cfg.atom.present) {
        omega_a = cfg.atom.track_peak ? locate_peak(cfg.geometry, cfg.grid) : cfg.atom.omega_a;
        atom = AtomSpec{omega_a, cfg.atom.dipole, cfg.atom.position};
        g = atom_couplings(atom, basis);
    }
    return RunSetup{std::move(basis), std::move(axis),  std::move(probes),
                    route,            std::move(table), sgrid,
                    atom,             std::move(g),     omega_a};
}

LevelShiftMatrix point_level_shift(const RunConfig& cfg, const RunSetup& setup, double energy) {
    if (setup.basis.size() == 0) return empty_level_shift(cfg.kind, energy);
    if (setup.route == GammaRoute::green)
        return gamma_green(cfg.geometry, setup.basis, energy, setup.sgrid);
    return gamma_quadrature(setup.table, energy);
}

void append_engine_manifest(std::vector<std::pair<std::string, std::string>>& manifest,
                            const RunConfig& cfg, const RunSetup& setup,
                            std::size_t tail_warnings) {
    manifest.emplace_back("engine.axis", frequency_axis(cfg.kind) ? "omega" : "energy");
    manifest.emplace_back("engine.gamma_route", to_string(setup.route));
    manifest.emplace_back("engine.table_nodes", std::to_string(setup.table.size()));
    if (setup.table.size() > 0)
        manifest.emplace_back("engine.table_e_max", format_double(setup.table.energies.back()));
    manifest.emplace_back("engine.tail_warnings", std::to_string(tail_warnings));
    if (cfg.atom.present)
        manifest.emplace_back("atom.omega_a_resolved", format_double(setup.omega_a));
    manifest.emplace_back("conventions.smatrix",
                          "rows and columns ordered left-in, right-in; entry (0,0) is "
                          "left-to-right transmission");
    manifest.emplace_back("conventions.dispersion", "energy = k^2/2, omega = k");
    manifest.emplace_back("output.precision", "17 significant digits");
}

}  // namespace

bool frequency_axis(WaveKind kind) { return kind != WaveKind::schroedinger; }

double grid_energy(WaveKind kind, double value) {
    if (kind == WaveKind::schroedinger) return value;
    return dispersion_from_omega(value).energy;
}

GammaRoute resolve_gamma_route(WaveKind kind, GammaRoute requested) {
    if (requested != GammaRoute::automatic) return requested;
    return kind == WaveKind::schroedinger ? GammaRoute::green : GammaRoute::quadrature;
}

double locate_peak(const PotentialSpec& spec, const GridConfig& grid) {
    const std::size_t count = std::max<std::size_t>(
        1024, std::min<std::size_t>(4 * static_cast<std::size_t>(grid.count), 16384));
    const LineScan scan = scan_reference(spec, grid.min, grid.max, count);
    if (scan.peak == 0 || scan.peak + 1 >= count)
        throw ConfigError(
            "atom.omega_a: the bare transmission peak sits at the probe band edge; widen "
            "grid.min/grid.max to bracket the resonance");
    return refine_vertex(scan);
}

CouplingTable build_coupling_table(const PotentialSpec& spec, const SystemBasis& basis,
                                   const QuadratureConfig& quad,
                                   const std::vector<double>& probe_energies, int threads) {
    if (probe_energies.empty())
        throw std::invalid_argument("coupling tables need at least one probe energy");
    std::vector<double> probes = probe_energies;
    std::sort(probes.begin(), probes.end());
    if (!(probes.front() > 0.0))
        throw std::invalid_argument("probe energies must be positive");
    {
        std::vector<double> unique;
        unique.reserve(probes.size());
        for (const double p : probes)
            if (unique.empty() || p - unique.back() > 1e-12 * std::max(1.0, p))
                unique.push_back(p);
        probes.swap(unique);
    }

    const double e_lo = quad.e_min;
    const double e_top = quad.resolved_e_max(probes.back());
    // Probes at an integration edge would put the principal-value logarithm
    // at its singularity.
    if (!(e_lo < probes.front()))
        throw ConfigError("quadrature.e_min: must lie below the probe band");
    if (!(e_top > probes.back()))
        throw ConfigError("quadrature.e_max: must lie above the probe band");

    std::vector<double> raw;
    raw.reserve(static_cast<std::size_t>(quad.count) + 4096);
    const double n1 = quad.count - 1.0;
    if (spec.kind == WaveKind::schroedinger) {
        for (int i = 0; i < quad.count; ++i) raw.push_back(e_lo + (e_top - e_lo) * i / n1);
    } else {
        const double k_lo = std::sqrt(2.0 * e_lo);
        const double k_hi = std::sqrt(2.0 * e_top);
        for (int i = 0; i < quad.count; ++i) {
            const double k = k_lo + (k_hi - k_lo) * i / n1;
            raw.push_back(0.5 * k * k);
        }
        const double fsr = M_PI / basis.length();
        const double band_lo = std::sqrt(2.0 * probes.front());
        const double band_hi = std::sqrt(2.0 * probes.back());
        const double wlo = std::max(k_lo, band_lo - 3.0 * fsr);
        const double whi = std::min(k_hi, band_hi + 3.0 * fsr);
        if (whi > wlo) {
            const double dw = fsr / 400.0;
            const int n = static_cast<int>(std::ceil((whi - wlo) / dw)) + 1;
            for (int i = 0; i < n; ++i) {
                const double w = wlo + (whi - wlo) * i / (n - 1.0);
                raw.push_back(0.5 * w * w);
            }
        }
        // Structure lines sit at most one free spectral range of the full
        // support apart; a scan finer than that spacing brackets every
        // transmission peak, and narrow peaks still register as a local
        // maximum no matter how far the scan step overshoots their width.
        const double fsr_s = M_PI / (spec.support_max - spec.support_min);
        double delta = fsr_s / 128.0;
        std::size_t scan_n = static_cast<std::size_t>(std::ceil((k_hi - k_lo) / delta)) + 1;
        scan_n = std::min<std::size_t>(std::max<std::size_t>(scan_n, 9), 200001);
        const LineScan lines = scan_reference(spec, k_lo, k_hi, scan_n);
        for (std::size_t j = 1; j + 1 < scan_n; ++j) {
            if (lines.y[j] > lines.y[j - 1] && lines.y[j] > lines.y[j + 1])
                add_line_cluster(spec, lines, j, fsr_s, k_lo, k_hi, raw);
        }
    }

    std::sort(raw.begin(), raw.end());
    std::vector<std::pair<double, bool>> nodes;  // (energy, is a probe)
    nodes.reserve(raw.size() + probes.size());
    for (const double e : raw) {
        // leave room around each probe so the on-shell match is unambiguous
        auto it = std::lower_bound(probes.begin(), probes.end(), e);
        double nearest = std::numeric_limits<double>::infinity();
        if (it != probes.end()) nearest = *it;
        if (it != probes.begin() && e - *(it - 1) < nearest - e) nearest = *(it - 1);
        if (std::abs(e - nearest) < 4e-9 * std::max(1.0, nearest)) continue;
        nodes.emplace_back(e, false);
    }
    for (const double p : probes) nodes.emplace_back(p, true);
    std::sort(nodes.begin(), nodes.end());
    std::vector<std::pair<double, bool>> kept;
    kept.reserve(nodes.size());
    for (const auto& node : nodes) {
        if (!kept.empty() && node.first - kept.back().first <= 1e-12 * std::max(1.0, node.first)) {
            if (node.second && !kept.back().second) kept.back() = node;
            continue;
        }
        kept.push_back(node);
    }

    const SpatialGrid sgrid{spec.support_min, spec.support_max, 2};
    std::vector<Eigen::MatrixXcd> rows(kept.size());
    parallel_for(threads, kept.size(), [&](std::size_t i) {
        try {
            const BathStateTable bath = bath_states(spec, basis, kept[i].first, sgrid);
            rows[i] = couplings(basis, bath).values.front();
        } catch (const SolverError& err) {
            throw SolverError(std::string(err.what()) + " (coupling node at energy " +
                              format_double(kept[i].first) + ")");
        }
    });
    CouplingTable table;
    table.kind = spec.kind;
    for (std::size_t i = 0; i < kept.size(); ++i) table.append(kept[i].first, std::move(rows[i]));
    return table;
}

SpectrumRun compute_spectrum(const RunConfig& cfg, int threads) {
    if (cfg.drive.present)
        throw ConfigError("drive.amplitude: driven runs produce steady states, not a spectrum");
    const RunSetup setup = prepare_run(cfg, threads);
    const bool want_oracle = cfg.outputs.emit_oracle(false);
    const std::size_t n = setup.axis.size();

    SpectrumRun run;
    run.resolved_omega_a = setup.omega_a;
    run.result.kind = cfg.kind;
    run.result.frequency_axis = frequency_axis(cfg.kind);
    run.result.grid = setup.axis;
    run.result.points.resize(n);
    if (want_oracle) run.oracle.resize(n);
    std::vector<unsigned char> tail_flag(n, 0);

    parallel_for(threads, n, [&](std::size_t i) {
        try {
            const double energy = setup.probes[i];
            const BathStateTable bath = bath_states(cfg.geometry, setup.basis, energy,
                                                    setup.sgrid);
            const CouplingTable w_row = couplings(setup.basis, bath);
            const LevelShiftMatrix ls = point_level_shift(cfg, setup, energy);
            tail_flag[i] = ls.tail_warning ? 1 : 0;
            const DMatrix d = d_matrix(energy, setup.basis, ls);
            SpectrumPoint pt;
            pt.bg = s_bg(cfg.geometry, setup.basis, bath, w_row);
            if (cfg.atom.present) {
                const LinearResponse resp = level_shift(setup.g, d, setup.basis);
                pt.has_atom = true;
                pt.gamma_s = resp.width();
                pt.delta_ls = resp.shift();
                pt.kappa_t = atom_transmission_rate(w_row, d, setup.basis, setup.g);
                pt.io = linear_smatrix_with_atom(w_row, d, setup.basis, setup.g, setup.omega_a);
            } else {
                pt.io = s_io(w_row, d);
            }
            pt.full = s_full(pt.bg, pt.io);
            run.result.points[i] = std::move(pt);
            if (want_oracle)
                run.oracle[i] = reference_t2(cfg.geometry,
                                             cfg.atom.present ? &setup.atom : nullptr, energy);
        } catch (const SolverError& err) {
            throw annotate_grid_point(err, i, setup.axis[i]);
        }
    });

    run.result.manifest = cfg.resolved;
    const std::size_t warnings = static_cast<std::size_t>(
        std::count(tail_flag.begin(), tail_flag.end(), static_cast<unsigned char>(1)));
    append_engine_manifest(run.result.manifest, cfg, setup, warnings);
    return run;
}

DriveRun compute_drive(const RunConfig& cfg, int threads) {
    if (!cfg.drive.present)
        throw ConfigError("drive.amplitude: this config has no drive block");
    const RunSetup setup = prepare_run(cfg, threads);
    const bool want_oracle = cfg.outputs.emit_oracle(true);
    const std::size_t n = setup.axis.size();

    DriveRun run;
    run.kind = cfg.kind;
    run.grid = setup.axis;
    run.resolved_omega_a = setup.omega_a;
    run.points.resize(n);
    if (want_oracle) run.oracle.resize(n);
    std::vector<unsigned char> tail_flag(n, 0);

    Eigen::Vector2cd b_in = Eigen::Vector2cd::Zero();
    b_in(cfg.drive.channel) = cfg.drive.amplitude;

    parallel_for(threads, n, [&](std::size_t i) {
        try {
            const double energy = setup.probes[i];
            const BathStateTable bath = bath_states(cfg.geometry, setup.basis, energy,
                                                    setup.sgrid);
            const CouplingTable w_row = couplings(setup.basis, bath);
            const LevelShiftMatrix ls = point_level_shift(cfg, setup, energy);
            tail_flag[i] = ls.tail_warning ? 1 : 0;
            const DMatrix d = d_matrix(energy, setup.basis, ls);
            DrivePoint pt;
            pt.response = semiclassical_steady_state(w_row, d, setup.basis, setup.g, setup.atom,
                                                     b_in);
            const SMatrix bg = s_bg(cfg.geometry, setup.basis, bath, w_row);
            pt.b_out_full = bg.s * pt.response.b_out;
            run.points[i] = std::move(pt);
            if (want_oracle)
                run.oracle[i] = reference_t2(cfg.geometry, nullptr, energy);
        } catch (const SolverError& err) {
            throw annotate_grid_point(err, i, setup.axis[i]);
        }
    });

    run.manifest = cfg.resolved;
    const std::size_t warnings = static_cast<std::size_t>(
        std::count(tail_flag.begin(), tail_flag.end(), static_cast<unsigned char>(1)));
    append_engine_manifest(run.manifest, cfg, setup, warnings);
    return run;
}

}  // namespace fewmode
