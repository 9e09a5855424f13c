#pragma once

#include <string>
#include <vector>

#include "mzp/beables.hpp"
#include "mzp/detection.hpp"
#include "mzp/guidance.hpp"

namespace mzp {

// All writers emit 17 significant digits so outputs round-trip bit-exactly.

// Columns: t, then per excited mode re/im/abs of q, then energy and Q.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

// Columns: x,y,z,t then A,E,B,I vector components.
void write_snapshot_csv(const std::string& path, const FieldSnapshot& snapshot);
void write_snapshot_json(const std::string& path, const FieldSnapshot& snapshot);

struct InterferenceRow {
    double phi = 0.0;
    double intensity_c = 0.0;
    double intensity_d = 0.0;
};

// Columns: phi, I_c, I_d.
void write_interference_csv(const std::string& path, const std::vector<InterferenceRow>& rows);

struct DetectionReport {
    std::string detector_label;
    double phi = 0.0;
    double interaction_time = 0.0;
    Complex field_factor;
    double which_path_modulus_squared = 0.0;
    std::vector<ElectronChannel> channels;
    DetectionResult result;
    double vacuum_overlap = 0.0;    // |<vacuum | post-absorption field>|
    double photon_overlap = 0.0;    // |<initial | post-absorption field>|
};

void write_detection_json(const std::string& path, const DetectionReport& report);

// Columns: angle between k_en and the polarization, probability density.
void write_angular_csv(const std::string& path, const std::vector<double>& angles,
                       const std::vector<double>& density);

}  // namespace mzp
