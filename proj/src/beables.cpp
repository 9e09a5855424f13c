#include "mzp/beables.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "mzp/wavefunctional.hpp"

namespace mzp {

std::vector<Vec3> GridSpec::points() const {
    std::vector<Vec3> out;
    out.reserve(point_count());
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t iz = 0; iz < nz; ++iz)
                out.push_back(Vec3{origin.x + step.x * static_cast<double>(ix),
                                   origin.y + step.y * static_cast<double>(iy),
                                   origin.z + step.z * static_cast<double>(iz)});
    return out;
}

GridSpec uniform_box_grid(const BoxGeometry& geometry, std::size_t n) {
    if (n == 0) throw std::invalid_argument("grid resolution must be positive");
    GridSpec grid;
    grid.origin = Vec3{0.0, 0.0, 0.0};
    const double h = geometry.side_length / static_cast<double>(n);
    grid.step = Vec3{h, h, h};
    grid.nx = grid.ny = grid.nz = n;
    return grid;
}

BeableEvaluator::BeableEvaluator(const PhotonState& state, const FieldConfiguration& config,
                                 const PhysicsConstants& physics, double node_tolerance) {
    const ModeSet& modes = config.modes();
    inv_sqrt_v_ = 1.0 / std::sqrt(modes.geometry().volume());
    light_speed_ = physics.c;

    std::vector<Complex> grad;
    if (!state.is_vacuum()) grad = grad_s(state, config, physics, node_tolerance);

    entries_.resize(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeEntry& m = modes.entry(i);
        entries_[i] = EntryData{m.k, m.polarization, cross(m.k, m.polarization),
                                config.coordinate(i), Complex{0.0, 0.0}};
    }
    const auto& excited = state.excited();
    for (std::size_t j = 0; j < excited.size(); ++j) entries_[excited[j].entry].pi = grad[j];
}

Vec3 BeableEvaluator::vector_potential(const Vec3& x) const {
    Vec3 sum{};
    for (const auto& e : entries_) {
        const double phase = dot(e.k, x);
        const Complex rot = e.q * std::polar(1.0, phase);
        sum += e.eps * (2.0 * rot.real());
    }
    return sum * inv_sqrt_v_;
}

Vec3 BeableEvaluator::electric_field(const Vec3& x) const {
    Vec3 sum{};
    for (const auto& e : entries_) {
        if (e.pi == Complex{0.0, 0.0}) continue;
        const Complex rot = e.pi * std::polar(1.0, -dot(e.k, x));
        sum += e.eps * (2.0 * rot.real());
    }
    return sum * (-light_speed_ * inv_sqrt_v_);
}

Vec3 BeableEvaluator::magnetic_induction(const Vec3& x) const {
    Vec3 sum{};
    for (const auto& e : entries_) {
        const Complex rot = e.q * std::polar(1.0, dot(e.k, x));
        sum += e.k_cross_eps * (-2.0 * rot.imag());
    }
    return sum * inv_sqrt_v_;
}

Vec3 BeableEvaluator::intensity(const Vec3& x) const {
    return cross(electric_field(x), magnetic_induction(x)) * light_speed_;
}

void BeableEvaluator::evaluate(const Vec3& x, Vec3& a, Vec3& e, Vec3& b, Vec3& intensity) const {
    Vec3 a_sum{}, e_sum{}, b_sum{};
    for (const auto& entry : entries_) {
        const double phase = dot(entry.k, x);
        const Complex forward = std::polar(1.0, phase);
        const Complex q_rot = entry.q * forward;
        a_sum += entry.eps * (2.0 * q_rot.real());
        b_sum += entry.k_cross_eps * (-2.0 * q_rot.imag());
        if (entry.pi != Complex{0.0, 0.0}) {
            const Complex pi_rot = entry.pi * std::conj(forward);
            e_sum += entry.eps * (2.0 * pi_rot.real());
        }
    }
    a = a_sum * inv_sqrt_v_;
    e = e_sum * (-light_speed_ * inv_sqrt_v_);
    b = b_sum * inv_sqrt_v_;
    intensity = cross(e, b) * light_speed_;
}

FieldSnapshot evaluate_beables(const PhotonState& state, const FieldConfiguration& config,
                               const std::vector<Vec3>& positions, const PhysicsConstants& physics,
                               double node_tolerance) {
    const BeableEvaluator evaluator(state, config, physics, node_tolerance);
    FieldSnapshot snapshot;
    snapshot.time = config.time();
    snapshot.positions = positions;
    const std::size_t n = positions.size();
    snapshot.vector_potential.resize(n);
    snapshot.electric_field.resize(n);
    snapshot.magnetic_induction.resize(n);
    snapshot.intensity.resize(n);
    const std::int64_t count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i)
        evaluator.evaluate(positions[i], snapshot.vector_potential[i], snapshot.electric_field[i],
                           snapshot.magnetic_induction[i], snapshot.intensity[i]);
    return snapshot;
}

namespace {

// Every lattice site (k and -k partners) with its coordinate and phase-gradient
// value, for the literal reference sums.
struct SiteData {
    Vec3 k;
    Vec3 eps;
    Complex q;
    Complex pi;
};

std::vector<SiteData> enumerate_sites(const PhotonState& state, const FieldConfiguration& config,
                                      const PhysicsConstants& physics, double node_tolerance) {
    std::vector<Complex> grad;
    if (!state.is_vacuum()) grad = grad_s(state, config, physics, node_tolerance);
    const ModeSet& modes = config.modes();
    std::vector<SiteData> sites;
    sites.reserve(2 * modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeEntry& m = modes.entry(i);
        Complex pi{0.0, 0.0};
        const auto& excited = state.excited();
        for (std::size_t j = 0; j < excited.size(); ++j)
            if (excited[j].entry == i) pi = grad[j];
        sites.push_back(SiteData{m.k, m.polarization, config.coordinate(i), pi});
        // -k partner: same polarization vector, conjugate coordinate and gradient.
        sites.push_back(SiteData{-m.k, m.polarization, std::conj(config.coordinate(i)),
                                 std::conj(pi)});
    }
    return sites;
}

Vec3 real_part(const std::array<Complex, 3>& v) {
    return Vec3{v[0].real(), v[1].real(), v[2].real()};
}

}  // namespace

FieldSnapshot evaluate_beables_serial(const PhotonState& state, const FieldConfiguration& config,
                                      const std::vector<Vec3>& positions,
                                      const PhysicsConstants& physics, double node_tolerance) {
    const std::vector<SiteData> sites = enumerate_sites(state, config, physics, node_tolerance);
    const double inv_sqrt_v = 1.0 / std::sqrt(config.modes().geometry().volume());
    const double c = physics.c;

    FieldSnapshot snapshot;
    snapshot.time = config.time();
    snapshot.positions = positions;
    for (const Vec3& x : positions) {
        std::array<Complex, 3> a{}, e{}, b{};
        for (const auto& s : sites) {
            const Complex forward = std::polar(1.0, dot(s.k, x));
            const Complex aq = s.q * forward;
            a[0] += s.eps.x * aq;
            a[1] += s.eps.y * aq;
            a[2] += s.eps.z * aq;
            const Vec3 kxe = cross(s.k, s.eps);
            const Complex bq = Complex{0.0, 1.0} * s.q * forward;
            b[0] += kxe.x * bq;
            b[1] += kxe.y * bq;
            b[2] += kxe.z * bq;
            const Complex ep = s.pi * std::conj(forward);
            e[0] += -c * s.eps.x * ep;
            e[1] += -c * s.eps.y * ep;
            e[2] += -c * s.eps.z * ep;
        }
        // Momentum density double sum: -(i c^2 / V) sum_{s'} sum_{s} eps' x (k x eps)
        //   (dS/dq_{s'}) q_s e^{i(k - k').x}
        std::array<Complex, 3> intensity{};
        const double inv_v = inv_sqrt_v * inv_sqrt_v;
        for (const auto& sp : sites) {
            if (sp.pi == Complex{0.0, 0.0}) continue;
            for (const auto& s : sites) {
                const Vec3 triple = cross(sp.eps, cross(s.k, s.eps));
                const Complex weight = Complex{0.0, -c * c} * inv_v * sp.pi * s.q *
                                       std::polar(1.0, dot(s.k - sp.k, x));
                intensity[0] += triple.x * weight;
                intensity[1] += triple.y * weight;
                intensity[2] += triple.z * weight;
            }
        }
        snapshot.vector_potential.push_back(real_part(a) * inv_sqrt_v);
        snapshot.electric_field.push_back(real_part(e) * inv_sqrt_v);
        snapshot.magnetic_induction.push_back(real_part(b) * inv_sqrt_v);
        snapshot.intensity.push_back(real_part(intensity));
    }
    return snapshot;
}

Vec3 evaluate_vector_potential(const FieldConfiguration& config, const Vec3& x) {
    const ModeSet& modes = config.modes();
    Vec3 sum{};
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeEntry& m = modes.entry(i);
        const Complex rot = config.coordinate(i) * std::polar(1.0, dot(m.k, x));
        sum += m.polarization * (2.0 * rot.real());
    }
    return sum / std::sqrt(modes.geometry().volume());
}

Vec3 evaluate_magnetic_induction(const FieldConfiguration& config, const Vec3& x) {
    const ModeSet& modes = config.modes();
    Vec3 sum{};
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeEntry& m = modes.entry(i);
        const Complex rot = config.coordinate(i) * std::polar(1.0, dot(m.k, x));
        sum += cross(m.k, m.polarization) * (-2.0 * rot.imag());
    }
    return sum / std::sqrt(modes.geometry().volume());
}

void closed_form_beables(const RegionConstants& constants, const FieldConfiguration& background,
                         const PhysicsConstants& physics, const Vec3& x, double t, Vec3* a,
                         Vec3* e, Vec3* b, Vec3* intensity) {
    const ModeSet& modes = background.modes();
    const double v = modes.geometry().volume();
    const double inv_sqrt_v = 1.0 / std::sqrt(v);
    const double hc = physics.hbar * physics.c;
    const double q0_sq = constants.q0 * constants.q0;

    std::vector<std::size_t> beam_entries;
    const Vec3 eps0 = modes.entry(*modes.find(constants.beams.front().mode)).polarization;
    double a_cos = 0.0;
    Vec3 a_dir{};
    double sin_sum = 0.0;
    Vec3 k_sin_sum{};
    Vec3 b_exc{};
    for (const auto& beam : constants.beams) {
        const auto idx = modes.find(beam.mode);
        if (!idx) throw std::invalid_argument("beam mode outside the lattice");
        beam_entries.push_back(*idx);
        const ModeEntry& m = modes.entry(*idx);
        const double theta = dot(m.k, x) - constants.omega * t - beam.phase;
        a_cos += beam.amplitude * std::cos(theta);
        sin_sum += beam.amplitude * std::sin(theta);
        k_sin_sum += m.k * (beam.amplitude * std::sin(theta));
        b_exc += cross(m.k, m.polarization) * (-2.0 * inv_sqrt_v * beam.amplitude * std::sin(theta));
    }
    a_dir = eps0 * (2.0 * inv_sqrt_v * a_cos);

    // Background sums u(x), v(x) over modes not carried by any beam.
    Vec3 u{}, vsum{};
    for (std::size_t i = 0; i < modes.size(); ++i) {
        bool is_beam = false;
        for (const std::size_t be : beam_entries) is_beam = is_beam || be == i;
        if (is_beam) continue;
        const ModeEntry& m = modes.entry(i);
        const Complex rot = background.coordinate(i) * std::polar(1.0, dot(m.k, x));
        u += m.polarization * (2.0 * rot.real());
        vsum += cross(m.k, m.polarization) * (-2.0 * rot.imag());
    }

    if (a) *a = a_dir + u * inv_sqrt_v;
    if (e) *e = eps0 * (-hc * inv_sqrt_v * sin_sum / q0_sq);
    if (b) *b = b_exc + vsum * inv_sqrt_v;
    if (intensity) {
        const Vec3 main = k_sin_sum * (2.0 * hc * physics.c / (q0_sq * v) * sin_sum);
        const Vec3 bg_cross =
            cross(eps0, vsum) * (-hc * physics.c / (q0_sq * v) * sin_sum);
        *intensity = main + bg_cross;
    }
}

ClassicalRelationDefects check_classical_relations(const PhotonState& state,
                                                   const Trajectory& trajectory,
                                                   const std::vector<Vec3>& points, double h_space,
                                                   const PhysicsConstants& physics) {
    const std::size_t n = trajectory.sample_count();
    if (n < 3) throw std::invalid_argument("need at least 3 trajectory samples");
    const double dt = trajectory.times[1] - trajectory.times[0];

    ClassicalRelationDefects defects;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const FieldConfiguration prev = trajectory.configuration_at(k - 1);
        const FieldConfiguration curr = trajectory.configuration_at(k);
        const FieldConfiguration next = trajectory.configuration_at(k + 1);
        const BeableEvaluator eval_curr(state, curr, physics);

        for (const Vec3& x : points) {
            // E = -(1/c) dA/dt
            const Vec3 da_dt =
                (evaluate_vector_potential(next, x) - evaluate_vector_potential(prev, x)) /
                (2.0 * dt);
            const Vec3 e_defect = da_dt / physics.c + eval_curr.electric_field(x);
            defects.electric = std::max(defects.electric, norm(e_defect));

            // B = curl A
            auto potential = [&](const Vec3& p) { return evaluate_vector_potential(curr, p); };
            const Vec3 dx{h_space, 0.0, 0.0}, dy{0.0, h_space, 0.0}, dz{0.0, 0.0, h_space};
            const Vec3 d_dx = (potential(x + dx) - potential(x - dx)) / (2.0 * h_space);
            const Vec3 d_dy = (potential(x + dy) - potential(x - dy)) / (2.0 * h_space);
            const Vec3 d_dz = (potential(x + dz) - potential(x - dz)) / (2.0 * h_space);
            const Vec3 curl{d_dy.z - d_dz.y, d_dz.x - d_dx.z, d_dx.y - d_dy.x};
            const Vec3 b_defect = curl - eval_curr.magnetic_induction(x);
            defects.magnetic = std::max(defects.magnetic, norm(b_defect));
        }
    }
    return defects;
}

BeamTotals beam_totals(const PhotonState& state, const RegionConstants& constants,
                       const PhysicsConstants& physics) {
    const ModeSet& modes = state.modes();
    BeamTotals totals;
    totals.energy = total_energy(state, physics);
    const double v = modes.geometry().volume();
    for (const auto& beam : constants.beams) {
        const auto idx = modes.find(beam.mode);
        if (!idx) throw std::invalid_argument("beam mode outside the lattice");
        const Vec3 k = modes.entry(*idx).k;
        // G_b = (hbar/2) w_b k_b with w_b = 2|c_b|^2
        const Vec3 momentum = k * (0.5 * physics.hbar * beam.omega_weight);
        totals.beams.push_back(
            BeamMomentum{beam.label, momentum, momentum * (physics.c * physics.c / v)});
        totals.momentum += momentum;
        totals.beam_momentum_sum += norm(momentum);
    }
    return totals;
}

namespace {

Vec3 box_average_intensity(const PhotonState& state, const FieldConfiguration& config,
                           std::size_t grid_n, const PhysicsConstants& physics) {
    const BeableEvaluator evaluator(state, config, physics);
    const std::vector<Vec3> points =
        uniform_box_grid(config.modes().geometry(), grid_n).points();
    Vec3 sum{};
    for (const Vec3& x : points) sum += evaluator.intensity(x);
    return sum / static_cast<double>(points.size());
}

}  // namespace

Vec3 momentum_volume_quadrature_serial(const PhotonState& state, const FieldConfiguration& config,
                                       std::size_t grid_n, const PhysicsConstants& physics) {
    const double v = config.modes().geometry().volume();
    const Vec3 average = box_average_intensity(state, config, grid_n, physics);
    return average * (v / (physics.c * physics.c));
}

Vec3 momentum_volume_quadrature(const PhotonState& state, const FieldConfiguration& config,
                                std::size_t grid_n, const PhysicsConstants& physics) {
    const BeableEvaluator evaluator(state, config, physics);
    const std::vector<Vec3> points =
        uniform_box_grid(config.modes().geometry(), grid_n).points();
    std::vector<Vec3> values(points.size());
    const std::int64_t count = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) values[i] = evaluator.intensity(points[i]);
    Vec3 sum{};
    for (const Vec3& value : values) sum += value;  // deterministic serial reduction
    const double v = config.modes().geometry().volume();
    return sum / static_cast<double>(points.size()) * (v / (physics.c * physics.c));
}

Vec3 cycle_average_intensity(const PhotonState& state, const RegionConstants& constants,
                             const FieldConfiguration& background, const Vec3& x,
                             std::size_t time_samples, const PhysicsConstants& physics) {
    if (time_samples == 0) throw std::invalid_argument("need at least one time sample");
    const double period = kTwoPi / constants.omega;
    Vec3 sum{};
    for (std::size_t s = 0; s < time_samples; ++s) {
        const double t = period * static_cast<double>(s) / static_cast<double>(time_samples);
        const FieldConfiguration config = analytic_solution(constants, background, t);
        const BeableEvaluator evaluator(state, config, physics);
        sum += evaluator.intensity(x);
    }
    return sum / static_cast<double>(time_samples);
}

Vec3 cycle_average_intensity_closed(const RegionConstants& constants, const ModeSet& modes,
                                    const PhysicsConstants& physics, const Vec3& x) {
    const double hc2 = physics.hbar * physics.c * physics.c;
    const double q0_sq = constants.q0 * constants.q0;
    const double v = modes.geometry().volume();

    Vec3 sum{};
    for (const auto& outer : constants.beams) {
        const Vec3 k_outer = modes.entry(*modes.find(outer.mode)).k;
        for (const auto& inner : constants.beams) {
            const Vec3 k_inner = modes.entry(*modes.find(inner.mode)).k;
            const double angle =
                dot(k_outer - k_inner, x) - (outer.phase - inner.phase);
            sum += k_inner * (outer.amplitude * inner.amplitude * std::cos(angle));
        }
    }
    return sum * (hc2 / (q0_sq * v));
}

Vec3 box_cycle_average_closed(const RegionConstants& constants, const ModeSet& modes,
                              const PhysicsConstants& physics) {
    // Only the beam-diagonal terms survive the box integral:
    // (hbar c^2 / V) sum_b |c_b|^2 k_b with |c_b|^2 = a_b^2 / q0^2.
    const double hc2 = physics.hbar * physics.c * physics.c;
    const double q0_sq = constants.q0 * constants.q0;
    const double v = modes.geometry().volume();
    Vec3 sum{};
    for (const auto& beam : constants.beams) {
        const Vec3 k = modes.entry(*modes.find(beam.mode)).k;
        sum += k * (beam.amplitude * beam.amplitude / q0_sq);
    }
    return sum * (hc2 / v);
}

Vec3 box_cycle_average_intensity_serial(const PhotonState& state, const RegionConstants& constants,
                                        const FieldConfiguration& background, std::size_t grid_n,
                                        std::size_t time_samples,
                                        const PhysicsConstants& physics) {
    const double period = kTwoPi / constants.omega;
    std::vector<Vec3> per_sample(time_samples);
    for (std::size_t s = 0; s < time_samples; ++s) {
        const double t = period * static_cast<double>(s) / static_cast<double>(time_samples);
        const FieldConfiguration config = analytic_solution(constants, background, t);
        per_sample[s] = box_average_intensity(state, config, grid_n, physics);
    }
    Vec3 sum{};
    for (const Vec3& value : per_sample) sum += value;
    return sum / static_cast<double>(time_samples);
}

Vec3 box_cycle_average_intensity(const PhotonState& state, const RegionConstants& constants,
                                 const FieldConfiguration& background, std::size_t grid_n,
                                 std::size_t time_samples, const PhysicsConstants& physics) {
    const double period = kTwoPi / constants.omega;
    std::vector<Vec3> per_sample(time_samples);
    const std::int64_t count = static_cast<std::int64_t>(time_samples);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < count; ++s) {
        const double t = period * static_cast<double>(s) / static_cast<double>(time_samples);
        const FieldConfiguration config = analytic_solution(constants, background, t);
        per_sample[s] = box_average_intensity(state, config, grid_n, physics);
    }
    Vec3 sum{};
    for (const Vec3& value : per_sample) sum += value;
    return sum / static_cast<double>(time_samples);
}

}  // namespace mzp
