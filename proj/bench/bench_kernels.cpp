// Timing comparison of the serial reference kernels against the OpenMP paths.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mzp/beables.hpp"
#include "mzp/guidance.hpp"
#include "mzp/optics.hpp"
#include "mzp/sampling.hpp"

using namespace mzp;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-34s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    const PhysicsConstants physics;
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel paths run serially\n");
#endif

    const auto modes =
        std::make_shared<const ModeSet>(ModeSet::build(BoxGeometry{kTwoPi, 2}));
    const CircuitDescription circuit = standard_mzi_circuit();
    const BeamModeMap beam_modes = standard_beam_mode_map(2);
    const double phi = 0.7;
    const PhotonState state = region_state(circuit, phi, Region::II, modes, beam_modes);

    const FieldConfiguration background =
        sample_ground_configuration(modes, physics, 20240601);
    const MatchedConstants constants = match_constants(1.3, 0.4, phi, physics, beam_modes);
    const FieldConfiguration config0 =
        analytic_solution(constants.region_ii, background, 0.0);

    {
        const std::vector<Vec3> points = uniform_box_grid(modes->geometry(), 40).points();
        FieldSnapshot serial_snapshot, parallel_snapshot;
        const double serial_ms = time_ms(
            [&] { serial_snapshot = evaluate_beables_serial(state, config0, points, physics); });
        const double parallel_ms = time_ms(
            [&] { parallel_snapshot = evaluate_beables(state, config0, points, physics); });
        report("beable grid 40^3 (cutoff 2)", serial_ms, parallel_ms);
        double diff = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            diff = std::max(diff, norm(serial_snapshot.intensity[i] -
                                       parallel_snapshot.intensity[i]));
        std::printf("  max |I_serial - I_parallel| = %.3e\n", diff);
    }

    {
        std::vector<EnsembleMember> members;
        for (int i = 0; i < 64; ++i) {
            const auto bg = sample_ground_configuration(modes, physics,
                                                        derive_seed(7, 2 * i));
            const auto photon =
                sample_photon_mode(1.0, physics, derive_seed(7, 2 * i + 1));
            const auto mc =
                match_constants(photon.amplitude, photon.phase, phi, physics, beam_modes);
            members.push_back(EnsembleMember{state, analytic_solution(mc.region_ii, bg, 0.0)});
        }
        IntegratorControls controls;
        const double period = kTwoPi / constants.region_ii.omega;
        controls.max_step = period / 50.0;
        controls.samples = 512;
        const double t_end = 10.0 * period;
        std::vector<Trajectory> serial_result, parallel_result;
        const double serial_ms = time_ms([&] {
            serial_result = integrate_ensemble_serial(members, t_end, controls, physics);
        });
        const double parallel_ms = time_ms(
            [&] { parallel_result = integrate_ensemble(members, t_end, controls, physics); });
        report("trajectory ensemble (64 members)", serial_ms, parallel_ms);
        double diff = 0.0;
        for (std::size_t m = 0; m < members.size(); ++m)
            for (std::size_t s = 0; s < serial_result[m].sample_count(); ++s)
                for (std::size_t j = 0; j < serial_result[m].excited_coords[s].size(); ++j)
                    diff = std::max(diff, std::abs(serial_result[m].excited_coords[s][j] -
                                                   parallel_result[m].excited_coords[s][j]));
        std::printf("  max coordinate difference = %.3e (expect exactly 0)\n", diff);
    }

    {
        const std::size_t grid_n = 16;
        const std::size_t time_samples = 64;
        Vec3 serial_avg, parallel_avg;
        const double serial_ms = time_ms([&] {
            serial_avg = box_cycle_average_intensity_serial(
                state, constants.region_ii, background, grid_n, time_samples, physics);
        });
        const double parallel_ms = time_ms([&] {
            parallel_avg = box_cycle_average_intensity(state, constants.region_ii, background,
                                                       grid_n, time_samples, physics);
        });
        report("box+cycle intensity average", serial_ms, parallel_ms);
        std::printf("  |serial - parallel| = %.3e (expect exactly 0)\n",
                    norm(serial_avg - parallel_avg));
    }

    return 0;
}
