#include "mzp/photon_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace mzp {

PhotonState PhotonState::vacuum(std::shared_ptr<const ModeSet> modes) {
    PhotonState state;
    state.modes_ = std::move(modes);
    return state;
}

PhotonState PhotonState::single(std::shared_ptr<const ModeSet> modes, const ModeIndex& mode) {
    return superposition(std::move(modes), {{mode, Complex{1.0, 0.0}}});
}

PhotonState PhotonState::superposition(std::shared_ptr<const ModeSet> modes,
                                       std::vector<std::pair<ModeIndex, Complex>> coeffs) {
    PhotonState state;
    state.modes_ = std::move(modes);
    for (const auto& [mode, coeff] : coeffs) {
        if (!is_canonical(mode))
            throw std::invalid_argument("excited modes must be canonical representatives");
        const auto idx = state.modes_->find(mode);
        if (!idx) throw std::invalid_argument("excited mode lies outside the lattice cutoff");
        const double kappa = state.modes_->entry(*idx).kappa;
        if (state.excited_.empty()) {
            state.kappa0_ = kappa;
        } else if (std::abs(kappa - state.kappa0_) > 1e-12 * state.kappa0_) {
            throw std::invalid_argument("all excited modes must share |k| = kappa0");
        }
        state.excited_.push_back(ExcitedMode{*idx, coeff});
    }
    std::sort(state.excited_.begin(), state.excited_.end(),
              [](const ExcitedMode& a, const ExcitedMode& b) { return a.entry < b.entry; });
    return state;
}

double PhotonState::norm_squared() const {
    double sum = 0.0;
    for (const auto& e : excited_) sum += std::norm(e.coeff);
    return sum;
}

bool PhotonState::is_normalized(double tol) const {
    if (is_vacuum()) return true;
    return std::abs(norm_squared() - 1.0) <= tol;
}

bool PhotonState::is_excited_entry(std::size_t entry) const {
    for (const auto& e : excited_)
        if (e.entry == entry) return true;
    return false;
}

std::string PhotonState::to_json() const {
    nlohmann::json j;
    j["kappa0"] = kappa0_;
    auto& arr = j["coefficients"] = nlohmann::json::array();
    for (const auto& e : excited_) {
        const ModeEntry& m = modes_->entry(e.entry);
        arr.push_back({{"n", {m.index.n.x, m.index.n.y, m.index.n.z}},
                       {"mu", m.index.mu},
                       {"re", e.coeff.real()},
                       {"im", e.coeff.imag()}});
    }
    return j.dump(2);
}

PhotonState PhotonState::from_json(const std::string& text, std::shared_ptr<const ModeSet> modes) {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<std::pair<ModeIndex, Complex>> coeffs;
    for (const auto& item : j.at("coefficients")) {
        const auto& n = item.at("n");
        coeffs.emplace_back(
            ModeIndex{Int3{n.at(0).get<int>(), n.at(1).get<int>(), n.at(2).get<int>()},
                      item.at("mu").get<int>()},
            Complex{item.at("re").get<double>(), item.at("im").get<double>()});
    }
    if (coeffs.empty()) return vacuum(std::move(modes));
    return superposition(std::move(modes), std::move(coeffs));
}

}  // namespace mzp
