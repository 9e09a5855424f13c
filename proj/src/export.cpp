#include "mzp/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mzp {

namespace {

std::string fmt(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

std::string mode_label(const ModeEntry& entry) {
    return "n" + std::to_string(entry.index.n.x) + "_" + std::to_string(entry.index.n.y) + "_" +
           std::to_string(entry.index.n.z) + "_mu" + std::to_string(entry.index.mu);
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
    std::ofstream out = open_or_throw(path);
    out << "t";
    for (const auto& e : trajectory.state.excited()) {
        const std::string label = mode_label(trajectory.state.modes().entry(e.entry));
        out << ",re_q_" << label << ",im_q_" << label << ",abs_q_" << label;
    }
    out << ",energy,quantum_potential\n";
    for (std::size_t s = 0; s < trajectory.sample_count(); ++s) {
        out << fmt(trajectory.times[s]);
        for (const Complex q : trajectory.excited_coords[s])
            out << "," << fmt(q.real()) << "," << fmt(q.imag()) << "," << fmt(std::abs(q));
        out << "," << fmt(trajectory.diagnostics.energy[s]) << ","
            << fmt(trajectory.diagnostics.quantum_potential[s]) << "\n";
    }
}

void write_snapshot_csv(const std::string& path, const FieldSnapshot& snapshot) {
    std::ofstream out = open_or_throw(path);
    out << "x,y,z,t,Ax,Ay,Az,Ex,Ey,Ez,Bx,By,Bz,Ix,Iy,Iz\n";
    for (std::size_t i = 0; i < snapshot.positions.size(); ++i) {
        const Vec3& x = snapshot.positions[i];
        const Vec3& a = snapshot.vector_potential[i];
        const Vec3& e = snapshot.electric_field[i];
        const Vec3& b = snapshot.magnetic_induction[i];
        const Vec3& s = snapshot.intensity[i];
        out << fmt(x.x) << "," << fmt(x.y) << "," << fmt(x.z) << "," << fmt(snapshot.time);
        for (const double value : {a.x, a.y, a.z, e.x, e.y, e.z, b.x, b.y, b.z, s.x, s.y, s.z})
            out << "," << fmt(value);
        out << "\n";
    }
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

void write_snapshot_json(const std::string& path, const FieldSnapshot& snapshot) {
    nlohmann::json j;
    j["time"] = snapshot.time;
    auto& rows = j["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < snapshot.positions.size(); ++i) {
        rows.push_back({{"x", vec_json(snapshot.positions[i])},
                        {"A", vec_json(snapshot.vector_potential[i])},
                        {"E", vec_json(snapshot.electric_field[i])},
                        {"B", vec_json(snapshot.magnetic_induction[i])},
                        {"I", vec_json(snapshot.intensity[i])}});
    }
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << "\n";
}

void write_interference_csv(const std::string& path, const std::vector<InterferenceRow>& rows) {
    std::ofstream out = open_or_throw(path);
    out << "phi,intensity_c,intensity_d\n";
    for (const auto& row : rows)
        out << fmt(row.phi) << "," << fmt(row.intensity_c) << "," << fmt(row.intensity_d) << "\n";
}

void write_detection_json(const std::string& path, const DetectionReport& report) {
    nlohmann::json j;
    j["detector"] = report.detector_label;
    j["phi"] = report.phi;
    j["interaction_time"] = report.interaction_time;
    j["field_factor"] = {{"re", report.field_factor.real()}, {"im", report.field_factor.imag()}};
    j["which_path_modulus_squared"] = report.which_path_modulus_squared;
    j["total_probability"] = report.result.total_probability;
    j["post_absorption"] = {{"vacuum_overlap", report.vacuum_overlap},
                            {"photon_overlap", report.photon_overlap}};
    auto& channels = j["channels"] = nlohmann::json::array();
    for (std::size_t i = 0; i < report.channels.size(); ++i) {
        channels.push_back({{"k", vec_json(report.channels[i].wave_vector)},
                            {"kinetic_energy", report.channels[i].kinetic_energy},
                            {"amplitude",
                             {{"re", report.result.amplitudes[i].real()},
                              {"im", report.result.amplitudes[i].imag()}}},
                            {"probability_density", report.result.probability_density[i]}});
    }
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << "\n";
}

void write_angular_csv(const std::string& path, const std::vector<double>& angles,
                       const std::vector<double>& density) {
    if (angles.size() != density.size())
        throw std::invalid_argument("angle and density columns must align");
    std::ofstream out = open_or_throw(path);
    out << "angle,probability_density\n";
    for (std::size_t i = 0; i < angles.size(); ++i)
        out << fmt(angles[i]) << "," << fmt(density[i]) << "\n";
}

}  // namespace mzp
