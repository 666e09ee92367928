#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slitdiff/core.hpp"
#include "slitdiff/experiment.hpp"
#include "slitdiff/intensity.hpp"

namespace slitdiff::cli
{
enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 1,
    exit_data = 2,
    exit_numerical = 3,
};

struct RunConfig
{
    ModelParameters parameters = reference_parameters();
    IntensityModel model = IntensityModel::quantum_decoherent;
    double beta_min = -0.01;
    double beta_max = 0.01;
    double beta_step = 1e-5;
    Truncation truncation;
    // Pick the truncation with converge_truncation() starting from `truncation`.
    bool auto_truncation = false;
    std::string output_path;
    Normalization normalization = Normalization::peak_one;

    // Throws ConfigError naming the offending key.
    void validate() const;
};

// Flat "key = value" text; '#' starts a comment. Keys absent from the text
// keep their defaults. Unknown keys and malformed values throw ConfigError.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Resolved parameter set as "key -> value", using the config key names.
std::map<std::string, double> parameter_map(const ModelParameters& parameters);

// "sin_beta,intensity" header, then one row per sample in %.11e format.
void write_curve_csv(std::ostream& out, const IntensityCurve& curve);

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace slitdiff::cli
