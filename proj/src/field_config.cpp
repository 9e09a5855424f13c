#include "mzp/field_config.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace mzp {

Complex FieldConfiguration::site_coordinate(const ModeIndex& m) const {
    const ModeIndex canon = canonical_representative(m);
    const auto idx = modes_->find(canon);
    if (!idx) throw std::out_of_range("mode index not in the lattice");
    return is_canonical(m) ? coords_[*idx] : std::conj(coords_[*idx]);
}

std::string FieldConfiguration::to_json() const {
    nlohmann::json j;
    j["time"] = time_;
    auto& arr = j["coordinates"] = nlohmann::json::array();
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        const ModeEntry& e = modes_->entry(i);
        arr.push_back({{"n", {e.index.n.x, e.index.n.y, e.index.n.z}},
                       {"mu", e.index.mu},
                       {"re", coords_[i].real()},
                       {"im", coords_[i].imag()}});
    }
    return j.dump(2);
}

FieldConfiguration FieldConfiguration::from_json(const std::string& text,
                                                 std::shared_ptr<const ModeSet> modes) {
    const nlohmann::json j = nlohmann::json::parse(text);
    FieldConfiguration config(std::move(modes), j.at("time").get<double>());
    for (const auto& item : j.at("coordinates")) {
        const auto& n = item.at("n");
        const ModeIndex m{Int3{n.at(0).get<int>(), n.at(1).get<int>(), n.at(2).get<int>()},
                          item.at("mu").get<int>()};
        const auto idx = config.modes().find(m);
        if (!idx) throw std::runtime_error("configuration refers to a mode outside the lattice");
        config.set_coordinate(*idx, Complex{item.at("re").get<double>(), item.at("im").get<double>()});
    }
    return config;
}

Complex vector_potential_component_site_sum(const FieldConfiguration& config, const Vec3& x,
                                            int component) {
    const ModeSet& modes = config.modes();
    const double inv_sqrt_v = 1.0 / std::sqrt(modes.geometry().volume());
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeEntry& e = modes.entry(i);
        const double eps_c = component == 0 ? e.polarization.x
                           : component == 1 ? e.polarization.y
                                            : e.polarization.z;
        const double phase = dot(e.k, x);
        const Complex plus = config.coordinate(i) * std::polar(1.0, phase);
        const Complex minus = std::conj(config.coordinate(i)) * std::polar(1.0, -phase);
        sum += eps_c * (plus + minus);
    }
    return sum * inv_sqrt_v;
}

}  // namespace mzp
