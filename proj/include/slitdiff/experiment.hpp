#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slitdiff/core.hpp"
#include "slitdiff/intensity.hpp"

namespace slitdiff
{
struct DataPoint
{
    double sin_beta = 0.0;
    double intensity = 0.0;
};

// Measured (or synthetic) relative intensities, sorted by sin(beta).
class ExperimentDataset
{
public:
    static constexpr std::size_t min_points = 3;

    // Sorts the points; throws DataError for fewer than three points,
    // negative or non-finite values, or repeated abscissae.
    ExperimentDataset(std::vector<DataPoint> points, std::string label);

    std::span<const DataPoint> points() const noexcept { return points_; }
    const std::string& label() const noexcept { return label_; }

private:
    std::vector<DataPoint> points_;
    std::string label_;
};

// Two numeric columns (sin_beta, intensity) separated by a comma, semicolon
// or whitespace. A non-numeric first line is taken as a header; blank lines
// and lines starting with '#' are skipped. Errors name the offending line.
ExperimentDataset load_dataset(std::istream& in, std::string label = "data");
ExperimentDataset load_dataset(const std::filesystem::path& path);

// Samples a model curve as a dataset, e.g. to round-trip a fit.
ExperimentDataset synthesize_dataset(const IntensityCurve& curve, std::string label = "synthetic");

enum class FitParameter
{
    amplitude_a1,
    amplitude_a2,
    weight_c1,
    weight_c2,
    coherence_lambda,
};

std::string_view to_string(FitParameter parameter);
// Accepts the short names (A1, A2, c1, c2, lambda_t) and the config keys.
FitParameter parse_fit_parameter(std::string_view name);

enum class Identifiability
{
    identifiable,
    // Determined only relative to the other fixed parameters: under peak-one
    // normalization A1, A2, c1 and c2 enter only through c1 A1 / (c2 A2).
    ratio_only,
    unidentifiable,
};

std::string_view to_string(Identifiability identifiability);

struct FitReport
{
    double rmse = 0.0;
    double max_abs_residual = 0.0;
    std::map<std::string, double> fitted_params;
    int iterations = 0;
    bool converged = true;
    std::map<std::string, Identifiability> identifiability;
    std::size_t points = 0;
};

// Peak-one normalizes both sides, interpolates the model linearly onto the
// data abscissae and reports residual statistics. Throws DataError when the
// curve does not span the data.
FitReport compare(const IntensityCurve& model_curve, const ExperimentDataset& data);

struct ParameterBounds
{
    double lower = 0.0;
    double upper = 0.0;
};

struct FitOptions
{
    IntensityModel model = IntensityModel::quantum_decoherent;
    Truncation truncation;
    int max_iterations = 400;
    // Model grid spacing used between data abscissae.
    double grid_step = 1e-5;
    std::map<FitParameter, ParameterBounds> bounds;
};

struct FitResult
{
    FitReport report;
    ModelParameters parameters;
};

// Identifiability of each free parameter for the given model under peak-one normalization.
std::map<std::string, Identifiability> classify_identifiability(IntensityModel model,
                                                                std::span<const FitParameter> free);

// Minimizes the compare() RMSE over the free parameters with a bounded
// Nelder-Mead search started at `initial`. c1 and c2 stay on the unit circle:
// a single free weight determines the other, and two free weights share one angle.
FitResult fit_parameters(const ExperimentDataset& data, std::span<const FitParameter> free,
                         const ModelParameters& initial, const FitOptions& options = {});

} // namespace slitdiff
