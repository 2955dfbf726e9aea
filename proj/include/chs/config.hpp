// Run configuration: INI-style text with [section] headers and key = value
// lines, '#' comments.  Unknown keys are rejected; the resolved configuration
// echoes back to text and round-trips through the parser.

#ifndef CHS_CONFIG_HPP
#define CHS_CONFIG_HPP

#include <string>

#include "chs/experiments.hpp"
#include "chs/stepper.hpp"

namespace chs {

struct RunConfig {
    std::string schema = "1";
    SimulationConfig simulation;

    // potential block, kept for the echo
    std::string potential_kind = "regular";
    double potential_c = 1.0;
    std::string graph_points;  // "x:y, x:y, ..." for the custom kind
    double c_pi = 0.0;

    // noise block
    std::string noise_kind = "silent";
    double amplitude = 1.0;
    double decay = 2.0;
    int truncation = 0;
    double mean_mode_sigma = 0.0;
    double epsilon = 0.0;
    std::string h_kind = "one";
    double h_scale = 1.0;

    // initial block
    std::string initial_kind = "zero";
    double initial_value = 0.0;
    double initial_amplitude = 0.0;
    int initial_mode = 1;

    // study block
    std::string study_name;
    std::vector<double> schedule;
    int n_paths = 64;
    int picard_iterations = 4;

    // output block
    std::string out_dir = "out";
    std::string run_id;  // empty: derived from seed and study

    std::string echo() const;
    StudySpec study_spec() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace chs

#endif
