#pragma once

#include <map>
#include <string>
#include <vector>

#include "mdp/demand.hpp"
#include "mdp/noise.hpp"

// Line-oriented `key = value` config files with [section] headers, the
// ExperimentSpec they describe, and an order-independent config hash that is
// embedded in every output file.

namespace mdp {

class parse_error : public std::runtime_error {
  public:
    parse_error(const std::string& msg, int line)
        : std::runtime_error(msg), line_number(line) {}
    int line_number;
};

// Flat view of a parsed file: keys are "section.key".
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

struct ExperimentSpec {
    std::vector<std::string> policies;  // roster names

    // [family]
    Family family = Family::linear;
    std::vector<double> theta;     // empty => sample from the box
    Box param_box;                 // empty => family default
    double c2_override = 0;        // 0 => certify
    double c_star_override = 0;
    int k = 0;
    int s = 2;

    // [noise]
    NoiseModel noise;

    // [run]
    std::vector<long> n_grid;
    int replications = 1;
    uint64_t master_seed = 0;
    std::string output_dir = ".";
    std::string study = "simulate";  // simulate | batch | scaling | separation

    // Canonical serialization: sorted key = value lines under sections.
    std::string to_config_text() const;
};

ExperimentSpec spec_from_config(const ConfigMap& cfg);

// FNV-1a over the sorted canonical key=value pairs; 16 hex digits. Stable
// under field reordering and comment/whitespace changes.
std::string config_hash(const ConfigMap& cfg);
std::string config_hash(const ExperimentSpec& spec);

// Build the concrete model an ExperimentSpec describes (fixed theta only;
// sampling is the batch runner's job).
DemandModel model_from_spec(const ExperimentSpec& spec);

}  // namespace mdp
