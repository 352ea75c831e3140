#include "fewmode/bath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fewmode/errors.hpp"
#include "fewmode/wave_integrals.hpp"

namespace fewmode {

namespace {

Complex cis(double phase) { return std::exp(Complex(0.0, phase)); }

}  // namespace

std::size_t PiecewiseSolution::region_index(double r) const {
    // regions_[i] covers [lo, hi]; first and last extend to infinity.
    std::size_t lo = 0;
    std::size_t hi = regions_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (r > regions_[mid].hi)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

Complex PiecewiseSolution::value(double r) const {
    const Region& reg = regions_[region_index(r)];
    Complex v = reg.a_plus * cis(reg.kappa * (r - reg.ref)) +
                reg.a_minus * cis(-reg.kappa * (r - reg.ref));
    if (reg.in_mode_interval) {
        for (Eigen::Index mu = 0; mu < weights_.size(); ++mu)
            v += weights_[mu] * (-2.0 * mode_norm_) *
                 sine_response(r - q_lo_, k_, nu_[static_cast<std::size_t>(mu)]);
    }
    return v;
}

Complex PiecewiseSolution::slope(double r) const {
    const Region& reg = regions_[region_index(r)];
    const Complex i(0.0, 1.0);
    Complex v = i * reg.kappa *
                (reg.a_plus * cis(reg.kappa * (r - reg.ref)) -
                 reg.a_minus * cis(-reg.kappa * (r - reg.ref)));
    if (reg.in_mode_interval) {
        for (Eigen::Index mu = 0; mu < weights_.size(); ++mu)
            v += weights_[mu] * (-2.0 * mode_norm_) *
                 sine_response_slope(r - q_lo_, k_, nu_[static_cast<std::size_t>(mu)]);
    }
    return v;
}

Complex PiecewiseSolution::outgoing_right() const {
    const Region& reg = regions_.back();
    return reg.a_plus * cis(-k_ * reg.ref);
}

Complex PiecewiseSolution::outgoing_left() const {
    const Region& reg = regions_.front();
    return reg.a_minus * cis(k_ * reg.ref);
}

// Assembles and solves the matching system. Unknowns: two plane-wave
// coefficients per region plus one forced-term weight per projected mode.
class RegionAssembler {
public:
    RegionAssembler(const PotentialSpec& spec, const SystemBasis& basis, double energy)
        : spec_(spec), basis_(basis) {
        if (!(energy > 0.0)) throw std::domain_error("scattering solve needs energy > 0");
        k_ = std::sqrt(2.0 * energy);
        energy_ = energy;

        pts_ = breakpoints(spec);
        auto insert_pt = [&](double x) {
            for (double p : pts_)
                if (std::abs(p - x) < 1e-12 * std::max(1.0, std::abs(x))) return;
            pts_.push_back(x);
        };
        insert_pt(basis.a());
        insert_pt(basis.b());
        std::sort(pts_.begin(), pts_.end());

        // per-breakpoint delta weight (schroedinger normalization)
        jump_weight_.assign(pts_.size(), 0.0);
        for (std::size_t d = 0; d < spec.deltas.size(); ++d) {
            const double pos = spec.deltas[d].position;
            bool matched = false;
            for (std::size_t j = 0; j < pts_.size(); ++j) {
                if (std::abs(pts_[j] - pos) < 1e-12 * std::max(1.0, std::abs(pos))) {
                    jump_weight_[j] += delta_weight(spec, d, energy);
                    matched = true;
                    break;
                }
            }
            if (!matched) throw SolverError("delta position missing from breakpoint set");
        }

        const std::size_t P = pts_.size();
        const std::size_t R = P + 1;
        regions_.resize(R);
        for (std::size_t i = 0; i < R; ++i) {
            Region& reg = regions_[i];
            reg.lo = (i == 0) ? pts_.front() : pts_[i - 1];
            reg.hi = (i == R - 1) ? pts_.back() : pts_[i];
            reg.ref = (i == 0) ? pts_.front() : pts_[i - 1];
            if (i == 0 || i == R - 1) {
                reg.kappa = k_;
                reg.in_mode_interval = false;
            } else {
                const double mid = 0.5 * (reg.lo + reg.hi);
                reg.kappa = std::sqrt(epsilon_smooth(spec, mid)) * k_;
                reg.in_mode_interval = mid > basis.a() && mid < basis.b();
                if (reg.in_mode_interval && std::abs(reg.kappa - k_) > 1e-12 * k_)
                    throw std::invalid_argument(
                        "projected-mode interval must be vacuum (dielectric layer overlaps it)");
            }
        }

        const std::size_t M = basis.size();
        n_ = 2 * R + M;
        mat_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
        assemble();
        lu_.compute(mat_);
        rcond_ = lu_.rcond();
        if (!(rcond_ > 1e-13))
            throw SolverError("matching system ill-conditioned at E=" + std::to_string(energy) +
                              " (rcond=" + std::to_string(rcond_) + ")");
    }

    RegionSolveResult run(bool with_green) const {
        const std::size_t M = basis_.size();
        const std::size_t cols = 2 + (with_green ? M : 0);
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_),
                                                      static_cast<Eigen::Index>(cols));
        rhs(0, 0) = cis(k_ * pts_.front());       // unit wave incident from the left
        rhs(1, 1) = cis(-k_ * pts_.back());       // unit wave incident from the right
        for (std::size_t mu = 0; mu < (with_green ? M : 0); ++mu) {
            for (std::size_t j = 0; j < pts_.size(); ++j) {
                Complex src = 2.0 * jump_weight_[j] * basis_.value(mu, pts_[j]);
                if (is_pt(j, basis_.a())) src += -basis_.slope_a(mu);
                if (is_pt(j, basis_.b())) src += basis_.slope_b(mu);
                rhs(static_cast<Eigen::Index>(3 + 2 * j), static_cast<Eigen::Index>(2 + mu)) = src;
            }
        }

        Eigen::MatrixXcd sol = lu_.solve(rhs);

        RegionSolveResult out;
        out.rcond = rcond_;
        out.residual = (mat_ * sol - rhs).cwiseAbs().maxCoeff();
        out.incident[0] = pack(sol.col(0));
        out.incident[1] = pack(sol.col(1));
        if (with_green) {
            out.green_columns.reserve(M);
            for (std::size_t mu = 0; mu < M; ++mu)
                out.green_columns.push_back(pack(sol.col(static_cast<Eigen::Index>(2 + mu))));
        }
        return out;
    }

    double orthogonality_residual(const Eigen::VectorXcd& raw) const {
        const std::size_t M = basis_.size();
        double worst = 0.0;
        for (std::size_t mu = 0; mu < M; ++mu) {
            const Eigen::Index row = static_cast<Eigen::Index>(2 + 2 * pts_.size() + mu);
            worst = std::max(worst, std::abs((mat_.row(row) * raw).value()));
        }
        return worst;
    }

private:
    struct Region {
        double lo, hi, ref, kappa;
        bool in_mode_interval;
    };

    bool is_pt(std::size_t j, double x) const {
        return std::abs(pts_[j] - x) < 1e-12 * std::max(1.0, std::abs(x));
    }

    Eigen::Index col_plus(std::size_t i) const { return static_cast<Eigen::Index>(2 * i); }
    Eigen::Index col_minus(std::size_t i) const { return static_cast<Eigen::Index>(2 * i + 1); }
    Eigen::Index col_w(std::size_t mu) const {
        return static_cast<Eigen::Index>(2 * regions_.size() + mu);
    }

    // adds the value (or slope) of region i at x into row, scaled by f
    void add_value(Eigen::Index row, std::size_t i, double x, Complex f) {
        const Region& reg = regions_[i];
        mat_(row, col_plus(i)) += f * cis(reg.kappa * (x - reg.ref));
        mat_(row, col_minus(i)) += f * cis(-reg.kappa * (x - reg.ref));
        if (reg.in_mode_interval) {
            for (std::size_t mu = 0; mu < basis_.size(); ++mu)
                mat_(row, col_w(mu)) += f * (-2.0 * basis_.norm_factor()) *
                                        sine_response(x - basis_.a(), k_, basis_.mode(mu).omega);
        }
    }

    void add_slope(Eigen::Index row, std::size_t i, double x, Complex f) {
        const Region& reg = regions_[i];
        const Complex i1(0.0, 1.0);
        mat_(row, col_plus(i)) += f * i1 * reg.kappa * cis(reg.kappa * (x - reg.ref));
        mat_(row, col_minus(i)) += -f * i1 * reg.kappa * cis(-reg.kappa * (x - reg.ref));
        if (reg.in_mode_interval) {
            for (std::size_t mu = 0; mu < basis_.size(); ++mu)
                mat_(row, col_w(mu)) +=
                    f * (-2.0 * basis_.norm_factor()) *
                    sine_response_slope(x - basis_.a(), k_, basis_.mode(mu).omega);
        }
    }

    void assemble() {
        const std::size_t P = pts_.size();
        const std::size_t R = regions_.size();
        const std::size_t M = basis_.size();

        mat_(0, col_plus(0)) = 1.0;          // incoming amplitude, left side
        mat_(1, col_minus(R - 1)) = 1.0;     // incoming amplitude, right side

        for (std::size_t j = 0; j < P; ++j) {
            const double x = pts_[j];
            const std::size_t l = j;
            const std::size_t r = j + 1;
            const Eigen::Index row_c = static_cast<Eigen::Index>(2 + 2 * j);
            const Eigen::Index row_j = row_c + 1;
            add_value(row_c, l, x, 1.0);
            add_value(row_c, r, x, -1.0);
            add_slope(row_j, r, x, 1.0);
            add_slope(row_j, l, x, -1.0);
            if (jump_weight_[j] != 0.0)
                add_value(row_j, l, x, -2.0 * jump_weight_[j]);
        }

        const double c = basis_.norm_factor();
        for (std::size_t mu = 0; mu < M; ++mu) {
            const Eigen::Index row = static_cast<Eigen::Index>(2 + 2 * P + mu);
            const double nu_mu = basis_.mode(mu).omega;
            for (std::size_t i = 0; i < R; ++i) {
                const Region& reg = regions_[i];
                if (!reg.in_mode_interval) continue;
                mat_(row, col_plus(i)) +=
                    c * cis(-reg.kappa * reg.ref) *
                    exp_sine_integral(reg.kappa, nu_mu, basis_.a(), reg.lo, reg.hi);
                mat_(row, col_minus(i)) +=
                    c * cis(reg.kappa * reg.ref) *
                    exp_sine_integral(-reg.kappa, nu_mu, basis_.a(), reg.lo, reg.hi);
                for (std::size_t sg = 0; sg < M; ++sg)
                    mat_(row, col_w(sg)) +=
                        -2.0 * c * c *
                        sine_response_overlap(nu_mu, k_, basis_.mode(sg).omega, basis_.a(),
                                              reg.lo, reg.hi);
            }
        }
    }

    PiecewiseSolution pack(const Eigen::VectorXcd& sol) const {
        PiecewiseSolution ps;
        ps.k_ = k_;
        ps.q_lo_ = basis_.a();
        ps.q_hi_ = basis_.b();
        ps.mode_norm_ = basis_.norm_factor();
        for (const auto& m : basis_.modes()) ps.nu_.push_back(m.omega);
        ps.weights_ = sol.tail(static_cast<Eigen::Index>(basis_.size()));
        ps.regions_.resize(regions_.size());
        for (std::size_t i = 0; i < regions_.size(); ++i) {
            auto& dst = ps.regions_[i];
            dst.lo = regions_[i].lo;
            dst.hi = regions_[i].hi;
            dst.ref = regions_[i].ref;
            dst.kappa = regions_[i].kappa;
            dst.in_mode_interval = regions_[i].in_mode_interval;
            dst.a_plus = sol(col_plus(i));
            dst.a_minus = sol(col_minus(i));
        }
        return ps;
    }

    const PotentialSpec& spec_;
    const SystemBasis& basis_;
    double k_ = 0.0;
    double energy_ = 0.0;
    std::vector<double> pts_;
    std::vector<double> jump_weight_;
    std::vector<Region> regions_;
    std::size_t n_ = 0;
    Eigen::MatrixXcd mat_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double rcond_ = 0.0;
};

RegionSolveResult solve_regions(const PotentialSpec& spec, const SystemBasis& basis,
                                double energy, bool with_green_columns) {
    RegionAssembler assembler(spec, basis, energy);
    return assembler.run(with_green_columns);
}

namespace {

// ---- dense integral-equation backend (validation) ----

struct NystromMesh {
    std::vector<double> nodes;
    std::vector<double> weights;       // composite trapezoid
    std::vector<double> eps_value;     // permittivity assigned per node for V
};

NystromMesh build_mesh(const PotentialSpec& spec, const SystemBasis& basis, int count) {
    std::vector<double> pts = breakpoints(spec);
    auto insert_pt = [&](double x) {
        for (double p : pts)
            if (std::abs(p - x) < 1e-12 * std::max(1.0, std::abs(x))) return;
        pts.push_back(x);
    };
    insert_pt(basis.a());
    insert_pt(basis.b());
    std::sort(pts.begin(), pts.end());

    const double total = pts.back() - pts.front();
    NystromMesh mesh;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const double lo = pts[s];
        const double hi = pts[s + 1];
        const int n = std::max(2, static_cast<int>(std::lround(count * (hi - lo) / total)) + 1);
        const double h = (hi - lo) / (n - 1);
        const double eps = epsilon_smooth(spec, 0.5 * (lo + hi));
        for (int i = 0; i < n; ++i) {
            const double x = lo + h * i;
            const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
            if (i == 0 && !mesh.nodes.empty() &&
                std::abs(mesh.nodes.back() - x) < 1e-12 * std::max(1.0, std::abs(x))) {
                mesh.weights.back() += w;  // shared edge node: second half-weight
                continue;
            }
            mesh.nodes.push_back(x);
            mesh.weights.push_back(w);
            mesh.eps_value.push_back(eps);
        }
    }
    return mesh;
}

}  // namespace

BathStateTable bath_states(const PotentialSpec& spec, const SystemBasis& basis,
                           double energy, const SpatialGrid& grid, double i_epsilon,
                           BathBackend backend) {
    if (!(energy > 0.0)) throw std::domain_error("bath states need energy > 0");
    if (grid.count < 2) throw std::invalid_argument("spatial grid needs at least 2 points");

    BathStateTable table;
    table.kind = spec.kind;
    table.energy = energy;
    table.k = std::sqrt(2.0 * energy);
    table.grid = grid;
    const std::size_t M = basis.size();
    table.couplings.resize(static_cast<Eigen::Index>(M), 2);

    if (backend == BathBackend::analytic) {
        if (i_epsilon != 0.0)
            throw std::invalid_argument(
                "i_epsilon must be 0 for the analytic backend (outgoing conditions are exact)");
        RegionAssembler assembler(spec, basis, energy);
        RegionSolveResult res = assembler.run(false);
        table.has_analytic = true;
        table.analytic = res.incident;
        table.diagnostics.rcond = res.rcond;
        table.diagnostics.residual = res.residual;
        for (int ch = 0; ch < 2; ++ch) {
            const PiecewiseSolution& ps = table.analytic[static_cast<std::size_t>(ch)];
            auto& smp = table.samples[static_cast<std::size_t>(ch)];
            smp.resize(static_cast<std::size_t>(grid.count));
            for (int i = 0; i < grid.count; ++i)
                smp[static_cast<std::size_t>(i)] = ps.value(grid.point(i));
            table.value_a[static_cast<std::size_t>(ch)] = ps.value(basis.a());
            table.value_b[static_cast<std::size_t>(ch)] = ps.value(basis.b());
            table.couplings.col(ch) = ps.mode_weights();
            const Complex out_r = ps.outgoing_right();
            const Complex out_l = ps.outgoing_left();
            table.transmitted[static_cast<std::size_t>(ch)] = (ch == 0) ? out_r : out_l;
            table.reflected[static_cast<std::size_t>(ch)] = (ch == 0) ? out_l : out_r;
            const double flux = std::norm(out_r) + std::norm(out_l);
            table.diagnostics.flux_error =
                std::max(table.diagnostics.flux_error, std::abs(1.0 - flux));

            Eigen::VectorXcd raw(static_cast<Eigen::Index>(2 * ps.regions().size() + M));
            for (std::size_t i = 0; i < ps.regions().size(); ++i) {
                raw(static_cast<Eigen::Index>(2 * i)) = ps.regions()[i].a_plus;
                raw(static_cast<Eigen::Index>(2 * i + 1)) = ps.regions()[i].a_minus;
            }
            raw.tail(static_cast<Eigen::Index>(M)) = ps.mode_weights();
            table.diagnostics.q_orthogonality =
                std::max(table.diagnostics.q_orthogonality,
                         assembler.orthogonality_residual(raw));
        }
        return table;
    }

    // nystrom backend: psi = phi + G0 (V - QH) psi discretized on the mesh.
    NystromMesh mesh = build_mesh(spec, basis, grid.count);
    const std::size_t N = mesh.nodes.size();
    const Complex kc = std::sqrt(Complex(2.0 * energy, 2.0 * i_epsilon));
    if (i_epsilon != 0.0 && M > 0)
        throw std::invalid_argument("i_epsilon diagnostics require an empty mode selector");
    const Complex ii(0.0, 1.0);
    auto g0 = [&](double r, double s) { return -(ii / kc) * std::exp(ii * kc * std::abs(r - s)); };

    const double A = basis.a();
    const double B = basis.b();
    const double c = basis.norm_factor();
    const double kr = std::sqrt(2.0 * energy);

    // analytic convolution of the kernel with one mode shape
    auto mode_column = [&](double r, std::size_t mu) -> Complex {
        const double nu = basis.mode(mu).omega;
        if (r <= A)
            return -(ii / kr) * cis(-kr * r) * c * exp_sine_integral(kr, nu, A, A, B);
        if (r >= B)
            return -(ii / kr) * cis(kr * r) * c * exp_sine_integral(-kr, nu, A, A, B);
        return -(ii / kr) * c *
               (cis(kr * r) * exp_sine_integral(-kr, nu, A, A, r) +
                cis(-kr * r) * exp_sine_integral(kr, nu, A, r, B));
    };

    std::vector<std::size_t> delta_node(spec.deltas.size());
    for (std::size_t d = 0; d < spec.deltas.size(); ++d) {
        const double pos = spec.deltas[d].position;
        std::size_t best = 0;
        for (std::size_t j = 1; j < N; ++j)
            if (std::abs(mesh.nodes[j] - pos) < std::abs(mesh.nodes[best] - pos)) best = j;
        if (std::abs(mesh.nodes[best] - pos) > 1e-10)
            throw SolverError("mesh does not contain a delta position");
        delta_node[d] = best;
    }

    // row functional h_lambda approximating <chi|H|psi> on the mesh
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M),
                                              static_cast<Eigen::Index>(N));
    for (std::size_t mu = 0; mu < M; ++mu) {
        for (std::size_t j = 0; j < N; ++j) {
            const double x = mesh.nodes[j];
            if (x >= A && x <= B)
                h(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(j)) +=
                    basis.mode(mu).energy * basis.value(mu, x) * mesh.weights[j];
            if (std::abs(x - A) < 1e-12 * std::max(1.0, std::abs(A)))
                h(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(j)) -=
                    0.5 * basis.slope_a(mu);
            if (std::abs(x - B) < 1e-12 * std::max(1.0, std::abs(B)))
                h(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(j)) +=
                    0.5 * basis.slope_b(mu);
        }
        for (std::size_t d = 0; d < spec.deltas.size(); ++d)
            h(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(delta_node[d])) +=
                delta_weight(spec, d, energy) * basis.value(mu, spec.deltas[d].position);
    }

    Eigen::MatrixXcd sys = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(N),
                                                      static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            const double v_s = (1.0 - mesh.eps_value[j]) * energy;
            Complex kij(0.0, 0.0);
            if (v_s != 0.0) kij += g0(mesh.nodes[i], mesh.nodes[j]) * v_s * mesh.weights[j];
            sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= kij;
        }
        for (std::size_t d = 0; d < spec.deltas.size(); ++d)
            sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(delta_node[d])) -=
                g0(mesh.nodes[i], spec.deltas[d].position) * delta_weight(spec, d, energy);
        for (std::size_t mu = 0; mu < M; ++mu) {
            const Complex cm = mode_column(mesh.nodes[i], mu);
            for (std::size_t j = 0; j < N; ++j)
                sys(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    cm * h(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(j));
        }
    }

    Eigen::MatrixXcd rhs(static_cast<Eigen::Index>(N), 2);
    for (std::size_t i = 0; i < N; ++i) {
        rhs(static_cast<Eigen::Index>(i), 0) = cis(kr * mesh.nodes[i]);
        rhs(static_cast<Eigen::Index>(i), 1) = cis(-kr * mesh.nodes[i]);
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys);
    table.diagnostics.rcond = lu.rcond();
    if (!(table.diagnostics.rcond > 1e-13))
        throw SolverError("integral-equation system ill-conditioned at E=" +
                          std::to_string(energy));
    Eigen::MatrixXcd psi = lu.solve(rhs);
    table.diagnostics.residual = (sys * psi - rhs).cwiseAbs().maxCoeff();

    for (int ch = 0; ch < 2; ++ch) {
        Eigen::VectorXcd col = psi.col(ch);
        table.couplings.col(ch) = h.cast<Complex>() * col;

        // Nystrom interpolation: evaluate the integral representation anywhere.
        auto eval = [&](double r) -> Complex {
            Complex v = (ch == 0) ? cis(kr * r) : cis(-kr * r);
            for (std::size_t j = 0; j < N; ++j) {
                const double v_s = (1.0 - mesh.eps_value[j]) * energy;
                if (v_s != 0.0)
                    v += g0(r, mesh.nodes[j]) * v_s * mesh.weights[j] *
                         col(static_cast<Eigen::Index>(j));
            }
            for (std::size_t d = 0; d < spec.deltas.size(); ++d)
                v += g0(r, spec.deltas[d].position) * delta_weight(spec, d, energy) *
                     col(static_cast<Eigen::Index>(delta_node[d]));
            for (std::size_t mu = 0; mu < M; ++mu)
                v -= mode_column(r, mu) *
                     table.couplings(static_cast<Eigen::Index>(mu), ch);
            return v;
        };

        auto& smp = table.samples[static_cast<std::size_t>(ch)];
        smp.resize(static_cast<std::size_t>(grid.count));
        for (int i = 0; i < grid.count; ++i)
            smp[static_cast<std::size_t>(i)] = eval(grid.point(i));
        table.value_a[static_cast<std::size_t>(ch)] = eval(A);
        table.value_b[static_cast<std::size_t>(ch)] = eval(B);

        // radiated amplitudes: coefficient of e^{+ikr} far right / e^{-ikr} far left
        auto radiated = [&](double dir) -> Complex {
            Complex amp(0.0, 0.0);
            for (std::size_t j = 0; j < N; ++j) {
                const double v_s = (1.0 - mesh.eps_value[j]) * energy;
                if (v_s != 0.0)
                    amp += cis(-dir * kr * mesh.nodes[j]) * v_s * mesh.weights[j] *
                           col(static_cast<Eigen::Index>(j));
            }
            for (std::size_t d = 0; d < spec.deltas.size(); ++d)
                amp += cis(-dir * kr * spec.deltas[d].position) *
                       delta_weight(spec, d, energy) *
                       col(static_cast<Eigen::Index>(delta_node[d]));
            for (std::size_t mu = 0; mu < M; ++mu)
                amp -= c * exp_sine_integral(-dir * kr, basis.mode(mu).omega, A, A, B) *
                       table.couplings(static_cast<Eigen::Index>(mu), ch);
            return -(ii / kr) * amp;
        };
        const Complex out_r = ((ch == 0) ? Complex(1.0, 0.0) : Complex(0.0, 0.0)) + radiated(1.0);
        const Complex out_l = ((ch == 1) ? Complex(1.0, 0.0) : Complex(0.0, 0.0)) + radiated(-1.0);
        table.transmitted[static_cast<std::size_t>(ch)] = (ch == 0) ? out_r : out_l;
        table.reflected[static_cast<std::size_t>(ch)] = (ch == 0) ? out_l : out_r;
        if (i_epsilon == 0.0) {
            const double flux = std::norm(out_r) + std::norm(out_l);
            table.diagnostics.flux_error =
                std::max(table.diagnostics.flux_error, std::abs(1.0 - flux));
        }

        double worst = 0.0;
        for (std::size_t mu = 0; mu < M; ++mu) {
            Complex overlap(0.0, 0.0);
            for (std::size_t j = 0; j < N; ++j)
                if (mesh.nodes[j] >= A && mesh.nodes[j] <= B)
                    overlap += basis.value(mu, mesh.nodes[j]) * mesh.weights[j] *
                               col(static_cast<Eigen::Index>(j));
            worst = std::max(worst, std::abs(overlap));
        }
        table.diagnostics.q_orthogonality = std::max(table.diagnostics.q_orthogonality, worst);
    }
    return table;
}

}  // namespace fewmode
