#include "mzp/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mzp {

namespace {

Complex conjugate_overlap(const PhotonState& state, const std::vector<Complex>& q_conj) {
    // sum_m conj(c_m) q_m with q_m = conj(q*_m)
    Complex sum{0.0, 0.0};
    const auto& excited = state.excited();
    for (std::size_t m = 0; m < excited.size(); ++m)
        sum += std::conj(excited[m].coeff) * std::conj(q_conj[m]);
    return sum;
}

// dy/dt for y = (q*_j); throws NodeError inside the node tolerance.
std::vector<Complex> flow_rhs(const PhotonState& state, const std::vector<Complex>& y,
                              const PhysicsConstants& physics, double node_tolerance) {
    const Complex overlap = conjugate_overlap(state, y);
    const double distance = std::abs(overlap);
    if (distance < node_tolerance) throw NodeError(distance);
    const Complex factor =
        Complex{0.0, 0.5 * physics.hbar * physics.c * physics.c} / overlap;
    std::vector<Complex> dy(y.size());
    const auto& excited = state.excited();
    for (std::size_t j = 0; j < y.size(); ++j) dy[j] = factor * std::conj(excited[j].coeff);
    return dy;
}

double error_norm(const std::vector<Complex>& err, const std::vector<Complex>& y0,
                  const std::vector<Complex>& y1, double abs_tol, double rel_tol) {
    double sum = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double scale_re =
            abs_tol + rel_tol * std::max(std::abs(y0[i].real()), std::abs(y1[i].real()));
        const double scale_im =
            abs_tol + rel_tol * std::max(std::abs(y0[i].imag()), std::abs(y1[i].imag()));
        const double er = err[i].real() / scale_re;
        const double ei = err[i].imag() / scale_im;
        sum += er * er + ei * ei;
    }
    return std::sqrt(sum / (2.0 * static_cast<double>(err.size())));
}

struct DormandPrince {
    // Classic 5(4) pair with FSAL.
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
    static constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
    static constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
    static constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
    static constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
    static constexpr double e7 = -1.0 / 40.0;
};

using StateVector = std::vector<Complex>;

StateVector axpy(const StateVector& y, double h,
                 std::initializer_list<std::pair<double, const StateVector*>> terms) {
    StateVector out = y;
    for (const auto& [coeff, k] : terms)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * coeff * (*k)[i];
    return out;
}

double ratio_drift(const PhotonState& state, const StateVector& q_conj) {
    const auto& excited = state.excited();
    double worst = 0.0;
    for (std::size_t i = 0; i < excited.size(); ++i) {
        if (std::abs(excited[i].coeff) < 1e-14) continue;
        for (std::size_t j = i + 1; j < excited.size(); ++j) {
            if (std::abs(excited[j].coeff) < 1e-14) continue;
            const Complex lhs = q_conj[i] * std::conj(excited[j].coeff);
            const Complex rhs = q_conj[j] * std::conj(excited[i].coeff);
            const double scale = std::max(std::abs(lhs), std::abs(rhs));
            if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
    }
    return worst;
}

}  // namespace

std::vector<Complex> guidance_rhs(const PhotonState& state, const FieldConfiguration& config,
                                  const PhysicsConstants& physics, double node_tolerance) {
    std::vector<Complex> grad = grad_s(state, config, physics, node_tolerance);
    const double c2 = physics.c * physics.c;
    for (auto& g : grad) g *= c2;
    return grad;
}

FieldConfiguration Trajectory::configuration_at(std::size_t sample) const {
    FieldConfiguration config = base;
    config.set_time(times.at(sample));
    const auto& excited = state.excited();
    for (std::size_t j = 0; j < excited.size(); ++j)
        config.set_coordinate(excited[j].entry, excited_coords[sample][j]);
    return config;
}

Trajectory integrate(const PhotonState& state, const FieldConfiguration& config0, double t_end,
                     const IntegratorControls& controls, const PhysicsConstants& physics) {
    if (!(t_end > config0.time())) throw std::invalid_argument("t_end must exceed the start time");
    if (controls.samples < 1) throw std::invalid_argument("need at least one output sample");

    Trajectory trajectory;
    trajectory.state = state;
    trajectory.base = config0;

    const double t0 = config0.time();
    const double span = t_end - t0;
    const double max_step = controls.max_step > 0.0 ? controls.max_step : span / 500.0;
    const double sample_dt = span / static_cast<double>(controls.samples);

    const auto& excited = state.excited();
    StateVector y(excited.size());
    for (std::size_t j = 0; j < excited.size(); ++j)
        y[j] = config0.conjugate_coordinate(excited[j].entry);

    auto record = [&](double t, const StateVector& q_conj) {
        trajectory.times.push_back(t);
        std::vector<Complex> coords(q_conj.size());
        for (std::size_t j = 0; j < q_conj.size(); ++j) coords[j] = std::conj(q_conj[j]);
        trajectory.excited_coords.push_back(coords);

        FieldConfiguration config = trajectory.base;
        config.set_time(t);
        for (std::size_t j = 0; j < excited.size(); ++j)
            config.set_coordinate(excited[j].entry, coords[j]);
        trajectory.diagnostics.energy.push_back(total_energy(state, physics));
        trajectory.diagnostics.quantum_potential.push_back(
            quantum_potential(state, config, physics, controls.node_tolerance));
        trajectory.diagnostics.node_distance.push_back(
            std::abs(superposition_sum(state, config)));
        trajectory.diagnostics.ratio_drift.push_back(ratio_drift(state, q_conj));
    };

    record(t0, y);
    trajectory.diagnostics.on_shell_initial = trajectory.diagnostics.ratio_drift.front() < 1e-10;

    if (excited.empty()) {
        // Vacuum: every coordinate is frozen.
        for (std::size_t s = 1; s <= controls.samples; ++s)
            record(t0 + sample_dt * static_cast<double>(s), y);
        return trajectory;
    }

    double t = t0;
    double h = std::min(max_step, sample_dt);
    StateVector k1;
    bool have_k1 = false;

    try {
        for (std::size_t s = 1; s <= controls.samples; ++s) {
            const double t_target = (s == controls.samples)
                                        ? t_end
                                        : t0 + sample_dt * static_cast<double>(s);
            while (t < t_target) {
                double step = std::min({h, max_step, t_target - t});
                if (step < 1e-14 * std::max(1.0, std::abs(t)))
                    throw std::runtime_error("integrator step size underflow");

                if (!have_k1) {
                    k1 = flow_rhs(state, y, physics, controls.node_tolerance);
                    have_k1 = true;
                }
                using DP = DormandPrince;
                const StateVector k2 = flow_rhs(
                    state, axpy(y, step, {{DP::a21, &k1}}), physics, controls.node_tolerance);
                const StateVector k3 =
                    flow_rhs(state, axpy(y, step, {{DP::a31, &k1}, {DP::a32, &k2}}), physics,
                             controls.node_tolerance);
                const StateVector k4 = flow_rhs(
                    state, axpy(y, step, {{DP::a41, &k1}, {DP::a42, &k2}, {DP::a43, &k3}}),
                    physics, controls.node_tolerance);
                const StateVector k5 =
                    flow_rhs(state,
                             axpy(y, step,
                                  {{DP::a51, &k1}, {DP::a52, &k2}, {DP::a53, &k3}, {DP::a54, &k4}}),
                             physics, controls.node_tolerance);
                const StateVector k6 = flow_rhs(state,
                                                axpy(y, step,
                                                     {{DP::a61, &k1},
                                                      {DP::a62, &k2},
                                                      {DP::a63, &k3},
                                                      {DP::a64, &k4},
                                                      {DP::a65, &k5}}),
                                                physics, controls.node_tolerance);
                const StateVector y_new = axpy(
                    y, step,
                    {{DP::b1, &k1}, {DP::b3, &k3}, {DP::b4, &k4}, {DP::b5, &k5}, {DP::b6, &k6}});
                const StateVector k7 = flow_rhs(state, y_new, physics, controls.node_tolerance);

                StateVector err(y.size());
                for (std::size_t i = 0; i < y.size(); ++i)
                    err[i] = step * (DP::e1 * k1[i] + DP::e3 * k3[i] + DP::e4 * k4[i] +
                                     DP::e5 * k5[i] + DP::e6 * k6[i] + DP::e7 * k7[i]);
                const double norm =
                    error_norm(err, y, y_new, controls.abs_tol, controls.rel_tol);

                if (norm <= 1.0) {
                    t += step;
                    y = y_new;
                    k1 = k7;  // FSAL
                } else {
                    have_k1 = true;  // k1 still valid at unchanged y
                }
                const double factor =
                    norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
                h = step * std::clamp(factor, 0.2, 5.0);
            }
            record(t_target, y);
        }
    } catch (const NodeError&) {
        trajectory.diagnostics.node_event = true;
        trajectory.diagnostics.node_time = t;
    }
    return trajectory;
}

std::vector<Trajectory> integrate_ensemble_serial(const std::vector<EnsembleMember>& members,
                                                  double t_end, const IntegratorControls& controls,
                                                  const PhysicsConstants& physics) {
    std::vector<Trajectory> out(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
        out[i] = integrate(members[i].state, members[i].config0, t_end, controls, physics);
    return out;
}

std::vector<Trajectory> integrate_ensemble(const std::vector<EnsembleMember>& members,
                                           double t_end, const IntegratorControls& controls,
                                           const PhysicsConstants& physics) {
    std::vector<Trajectory> out(members.size());
    const std::int64_t n = static_cast<std::int64_t>(members.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i)
        out[i] = integrate(members[i].state, members[i].config0, t_end, controls, physics);
    return out;
}

FieldConfiguration analytic_solution(const RegionConstants& constants,
                                     const FieldConfiguration& background, double t) {
    FieldConfiguration config = background;
    config.set_time(t);
    for (const auto& beam : constants.beams) {
        const auto idx = config.modes().find(beam.mode);
        if (!idx) throw std::invalid_argument("beam mode outside the lattice");
        // q*(t) = amplitude e^{i(omega t + phase)}  =>  q(t) is the conjugate
        const Complex q_conj =
            beam.amplitude * std::polar(1.0, constants.omega * t + beam.phase);
        config.set_coordinate(*idx, std::conj(q_conj));
    }
    return config;
}

Trajectory analytic_trajectory(const PhotonState& state, const RegionConstants& constants,
                               const FieldConfiguration& background, double t_end,
                               std::size_t samples, const PhysicsConstants& physics) {
    Trajectory trajectory;
    trajectory.state = state;
    trajectory.base = analytic_solution(constants, background, background.time());
    const double t0 = background.time();
    const double dt = (t_end - t0) / static_cast<double>(samples);
    const auto& excited = state.excited();
    for (std::size_t s = 0; s <= samples; ++s) {
        const double t = t0 + dt * static_cast<double>(s);
        const FieldConfiguration config = analytic_solution(constants, background, t);
        trajectory.times.push_back(t);
        std::vector<Complex> coords(excited.size());
        for (std::size_t j = 0; j < excited.size(); ++j)
            coords[j] = config.coordinate(excited[j].entry);
        trajectory.excited_coords.push_back(std::move(coords));
        trajectory.diagnostics.energy.push_back(total_energy(state, physics));
        trajectory.diagnostics.quantum_potential.push_back(
            quantum_potential(state, config, physics));
        trajectory.diagnostics.node_distance.push_back(
            std::abs(superposition_sum(state, config)));
        trajectory.diagnostics.ratio_drift.push_back(0.0);
    }
    trajectory.diagnostics.on_shell_initial = true;
    return trajectory;
}

std::vector<Complex> second_derivative_conjugate(const PhotonState& state,
                                                 const FieldConfiguration& config,
                                                 const PhysicsConstants& physics,
                                                 double node_tolerance) {
    const Complex overlap = superposition_sum(state, config);  // Gbar
    const double distance = std::abs(overlap);
    if (distance < node_tolerance) throw NodeError(distance);
    const double hc2 = physics.hbar * physics.c * physics.c;
    const Complex denominator = overlap * overlap * std::conj(overlap);
    std::vector<Complex> out;
    out.reserve(state.excited().size());
    for (const auto& e : state.excited())
        out.push_back(-0.25 * hc2 * hc2 * std::conj(e.coeff) / denominator);
    return out;
}

WaveEquationResidual wave_equation_residual(const PhotonState& state, const Trajectory& trajectory,
                                            const PhysicsConstants& physics) {
    const std::size_t n = trajectory.sample_count();
    if (n < 5) throw std::invalid_argument("need at least 5 samples for the 5-point stencil");
    const double h = trajectory.times[1] - trajectory.times[0];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double step = trajectory.times[k + 1] - trajectory.times[k];
        if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("residual check needs a uniform time grid");
    }

    const std::size_t modes = state.excited().size();
    WaveEquationResidual result;
    result.per_mode.assign(modes, {});
    const double inv_c2 = 1.0 / (physics.c * physics.c);
    for (std::size_t k = 2; k + 2 < n; ++k) {
        result.times.push_back(trajectory.times[k]);
        const FieldConfiguration config = trajectory.configuration_at(k);
        const std::vector<Complex> rhs = second_derivative_conjugate(state, config, physics);
        for (std::size_t j = 0; j < modes; ++j) {
            auto q_conj = [&](std::size_t s) { return std::conj(trajectory.excited_coords[s][j]); };
            const Complex second =
                (-q_conj(k - 2) + 16.0 * q_conj(k - 1) - 30.0 * q_conj(k) + 16.0 * q_conj(k + 1) -
                 q_conj(k + 2)) /
                (12.0 * h * h);
            const double defect = std::abs(inv_c2 * second - inv_c2 * rhs[j]);
            result.per_mode[j].push_back(defect);
            result.max_residual = std::max(result.max_residual, defect);
        }
    }
    return result;
}

}  // namespace mzp
