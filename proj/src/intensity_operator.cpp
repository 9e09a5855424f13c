#include "mzp/intensity_operator.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace mzp {

namespace {

struct Site {
    Vec3 k;
    Vec3 eps;
    double kappa = 0.0;
    Complex amplitude;  // one-photon coefficient on this site (0 on background)
};

std::vector<Site> enumerate_sites(const PhotonState& state) {
    const ModeSet& modes = state.modes();
    std::vector<Site> sites;
    sites.reserve(2 * modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeEntry& m = modes.entry(i);
        Complex amp{0.0, 0.0};
        for (const auto& e : state.excited())
            if (e.entry == i) amp = e.coeff;
        sites.push_back(Site{m.k, m.polarization, m.kappa, amp});
        sites.push_back(Site{-m.k, m.polarization, m.kappa, Complex{0.0, 0.0}});
    }
    return sites;
}

std::array<Complex, 3> accumulate(std::array<Complex, 3> acc, const Vec3& direction,
                                  Complex weight) {
    acc[0] += direction.x * weight;
    acc[1] += direction.y * weight;
    acc[2] += direction.z * weight;
    return acc;
}

}  // namespace

Vec3 intensity_operator_expectation(const PhotonState& state, const Vec3& x,
                                    IntensityOperatorKind kind, const PhysicsConstants& physics) {
    return intensity_operator_expectation(state, x, kind, physics, nullptr);
}

Vec3 intensity_operator_expectation(const PhotonState& state, const Vec3& x,
                                    IntensityOperatorKind kind, const PhysicsConstants& physics,
                                    double* max_imaginary_residue) {
    const std::vector<Site> sites = enumerate_sites(state);
    const double v = state.modes().geometry().volume();
    const double hc2 = physics.hbar * physics.c * physics.c;

    std::array<Complex, 3> acc{};

    if (kind == IntensityOperatorKind::NormalOrdered) {
        // (hbar c^2 / V) sum_{s s'} khat_s sqrt(k_s k_s') <a+_s a_s'> e^{i(k_s'-k_s).x},
        // <a+_s a_s'> = conj(c_s) c_s' on the one-photon sector.
        for (const auto& s : sites) {
            if (s.amplitude == Complex{0.0, 0.0}) continue;
            const Vec3 khat = s.k / s.kappa;
            for (const auto& sp : sites) {
                if (sp.amplitude == Complex{0.0, 0.0}) continue;
                const Complex weight = std::sqrt(s.kappa * sp.kappa) * std::conj(s.amplitude) *
                                       sp.amplitude * std::polar(1.0, dot(sp.k - s.k, x));
                acc = accumulate(acc, khat, weight);
            }
        }
        for (auto& component : acc) component *= hc2 / v;
        // Hermitian part: the ordering is not symmetric in (s, s'), so the raw
        // expectation carries a spurious imaginary vector.
    } else {
        // Symmetrized double sum with T_{s s'} = sqrt(k/k') eps x (k' x eps')
        // - sqrt(k'/k) (k x eps) x eps'. Nonvanishing expectations on the
        // one-photon sector: <a a'+> = delta + conj(c') c, <a+ a'> = conj(c) c'.
        for (const auto& s : sites) {
            for (const auto& sp : sites) {
                const Vec3 t = cross(s.eps, cross(sp.k, sp.eps)) * std::sqrt(s.kappa / sp.kappa) -
                               cross(cross(s.k, s.eps), sp.eps) * std::sqrt(sp.kappa / s.kappa);
                Complex lowering{0.0, 0.0};  // <a_s a+_s'>
                if (&s == &sp) lowering += 1.0;
                lowering += std::conj(sp.amplitude) * s.amplitude;
                const Complex raising = std::conj(s.amplitude) * sp.amplitude;  // <a+_s a_s'>
                const Complex phase = std::polar(1.0, dot(s.k - sp.k, x));
                const Complex bracket = -lowering * phase - raising * std::conj(phase);
                acc = accumulate(acc, t, bracket * (-hc2 / (4.0 * v)));
            }
        }
    }

    if (max_imaginary_residue) {
        double residue = 0.0;
        for (const auto& component : acc)
            residue = std::max(residue, std::abs(component.imag()));
        *max_imaginary_residue = residue;
    }
    return Vec3{acc[0].real(), acc[1].real(), acc[2].real()};
}

}  // namespace mzp
