#ifndef HEATLAB_RUNNER_HPP
#define HEATLAB_RUNNER_HPP

#include <iosfwd>
#include <string>

#include "heatlab/config.hpp"

namespace heatlab {

struct RunOptions {
    std::string config_path;  // optional when preset is given
    std::string preset;       // optional when config_path is given
    std::string out_dir = ".";
    int jobs = 0;  // 0: take from config / HEATLAB_JOBS / default 1
};

// Execute one run: resolve preset + config, solve, emit CSV + .meta sidecar
// (and a plot script when requested). Returns the process exit status:
// 0 success, 1 configuration error, 2 solver failure, 3 I/O error.
int run(const RunOptions& options, std::ostream& log, std::ostream& err);

}  // namespace heatlab

#endif
