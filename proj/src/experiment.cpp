#include "slitdiff/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "slitdiff/nelder_mead.hpp"

namespace slitdiff
{
namespace
{
std::string trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

std::optional<double> parse_number(std::string_view token)
{
    double value = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end)
        return std::nullopt;
    return value;
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::string normalized = line;
    std::replace_if(normalized.begin(), normalized.end(), [](char c) { return c == ',' || c == ';' || c == '\t'; },
                    ' ');
    std::istringstream stream(normalized);
    std::vector<std::string> fields;
    for (std::string field; stream >> field;)
        fields.push_back(field);
    return fields;
}

double peak_of(std::span<const DataPoint> points)
{
    double top = 0.0;
    for (const auto& p : points)
        top = std::max(top, p.intensity);
    return top;
}

bool in_ratio_group(FitParameter p)
{
    return p != FitParameter::coherence_lambda;
}

std::vector<double> model_grid(const ExperimentDataset& data, double step)
{
    const auto points = data.points();
    const double lo = points.front().sin_beta;
    const double hi = points.back().sin_beta;
    // Cap the grid so very wide datasets stay cheap.
    constexpr double max_nodes = 20000.0;
    step = std::max(step, (hi - lo) / max_nodes);
    std::vector<double> grid;
    for (double x = lo; x < hi; x = lo + static_cast<double>(grid.size()) * step)
        grid.push_back(x);
    for (const auto& p : points)
        grid.push_back(p.sin_beta);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// Free-parameter vector <-> model parameters, keeping c1^2 + c2^2 = 1.
class ParameterMap
{
public:
    ParameterMap(std::span<const FitParameter> free, const ModelParameters& initial, const FitOptions& options)
        : initial_(initial)
    {
        std::set<FitParameter> wanted(free.begin(), free.end());
        both_weights_ = wanted.count(FitParameter::weight_c1) && wanted.count(FitParameter::weight_c2);
        for (FitParameter p : wanted) {
            if (both_weights_ && p == FitParameter::weight_c2)
                continue;
            slots_.push_back(p);
        }
        for (FitParameter p : slots_) {
            auto [lo, hi] = default_bounds(p);
            if (auto it = options.bounds.find(p); it != options.bounds.end()) {
                lo = it->second.lower;
                hi = it->second.upper;
            }
            if (both_weights_ && p == FitParameter::weight_c1) {
                // Angle phi with c1 = cos(phi), c2 = sin(phi), phi in [0, pi/2].
                lo = 0.0;
                hi = 0.5 * std::numbers::pi;
            }
            if (!(lo <= hi))
                throw ConfigError(std::string(to_string(p)), "lower bound above upper bound");
            lower_.push_back(lo);
            upper_.push_back(hi);
        }
    }

    std::vector<double> start() const
    {
        std::vector<double> x;
        for (FitParameter p : slots_) {
            if (both_weights_ && p == FitParameter::weight_c1)
                x.push_back(std::atan2(initial_.weights.c2(), initial_.weights.c1()));
            else
                x.push_back(value_of(initial_, p));
        }
        return x;
    }

    std::vector<double> steps() const
    {
        std::vector<double> s;
        for (std::size_t i = 0; i < slots_.size(); ++i)
            s.push_back(0.1 * (upper_[i] - lower_[i] > 0.0 ? upper_[i] - lower_[i] : 1.0));
        return s;
    }

    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }

    ModelParameters apply(const std::vector<double>& x) const
    {
        double a1 = initial_.optics.amplitude_a1();
        double a2 = initial_.optics.amplitude_a2();
        double c1 = initial_.weights.c1();
        double c2 = initial_.weights.c2();
        double lambda_t = initial_.coherence.lambda_t();
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            switch (slots_[i]) {
            case FitParameter::amplitude_a1:
                a1 = x[i];
                break;
            case FitParameter::amplitude_a2:
                a2 = x[i];
                break;
            case FitParameter::weight_c1:
                if (both_weights_) {
                    c1 = std::cos(x[i]);
                    c2 = std::sin(x[i]);
                } else {
                    c1 = x[i];
                    c2 = std::sqrt(std::max(0.0, 1.0 - c1 * c1));
                }
                break;
            case FitParameter::weight_c2:
                c2 = x[i];
                c1 = std::sqrt(std::max(0.0, 1.0 - c2 * c2));
                break;
            case FitParameter::coherence_lambda:
                lambda_t = x[i];
                break;
            }
        }
        const OpticalSetup& o = initial_.optics;
        return {initial_.geometry, OpticalSetup{o.wavelength(), a1, a2, o.screen_distance()},
                SuperpositionWeights{c1, c2}, CoherenceModel{lambda_t}};
    }

private:
    static double value_of(const ModelParameters& m, FitParameter p)
    {
        switch (p) {
        case FitParameter::amplitude_a1:
            return m.optics.amplitude_a1();
        case FitParameter::amplitude_a2:
            return m.optics.amplitude_a2();
        case FitParameter::weight_c1:
            return m.weights.c1();
        case FitParameter::weight_c2:
            return m.weights.c2();
        case FitParameter::coherence_lambda:
            return m.coherence.lambda_t();
        }
        return 0.0;
    }

    std::pair<double, double> default_bounds(FitParameter p) const
    {
        switch (p) {
        case FitParameter::amplitude_a1:
        case FitParameter::amplitude_a2: {
            const double scale = std::max(std::abs(value_of(initial_, p)), 1.0);
            return {0.0, 10.0 * scale};
        }
        default:
            return {0.0, 1.0};
        }
    }

    ModelParameters initial_;
    std::vector<FitParameter> slots_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    bool both_weights_ = false;
};
} // namespace

ExperimentDataset::ExperimentDataset(std::vector<DataPoint> points, std::string label)
    : points_(std::move(points)), label_(std::move(label))
{
    if (points_.size() < min_points)
        throw DataError(label_ + ": at least 3 data points are required, got " + std::to_string(points_.size()));
    for (const auto& p : points_) {
        if (!std::isfinite(p.sin_beta) || !std::isfinite(p.intensity))
            throw DataError(label_ + ": data values must be finite");
        if (p.intensity < 0.0)
            throw DataError(label_ + ": intensities must be nonnegative");
    }
    std::stable_sort(points_.begin(), points_.end(),
                     [](const DataPoint& a, const DataPoint& b) { return a.sin_beta < b.sin_beta; });
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i].sin_beta == points_[i - 1].sin_beta)
            throw DataError(label_ + ": repeated sin_beta value " + std::to_string(points_[i].sin_beta));
}

ExperimentDataset load_dataset(std::istream& in, std::string label)
{
    std::vector<DataPoint> points;
    std::string line;
    int line_number = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        const auto fields = split_fields(text);
        const auto x = fields.size() == 2 ? parse_number(fields[0]) : std::nullopt;
        const auto y = fields.size() == 2 ? parse_number(fields[1]) : std::nullopt;
        if (!x || !y) {
            if (!seen_content && fields.size() == 2 && !x && !y) {
                seen_content = true;
                continue; // header
            }
            throw DataError(label + ":" + std::to_string(line_number) + ": expected two numeric columns, got '" +
                            text + "'");
        }
        seen_content = true;
        points.push_back({*x, *y});
    }
    return {std::move(points), std::move(label)};
}

ExperimentDataset load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError(path.string() + ": cannot open data file");
    return load_dataset(in, path.string());
}

ExperimentDataset synthesize_dataset(const IntensityCurve& curve, std::string label)
{
    std::vector<DataPoint> points;
    points.reserve(curve.size());
    for (const auto& s : curve.samples())
        points.push_back({s.sin_beta, s.intensity});
    return {std::move(points), std::move(label)};
}

std::string_view to_string(FitParameter parameter)
{
    switch (parameter) {
    case FitParameter::amplitude_a1:
        return "A1";
    case FitParameter::amplitude_a2:
        return "A2";
    case FitParameter::weight_c1:
        return "c1";
    case FitParameter::weight_c2:
        return "c2";
    case FitParameter::coherence_lambda:
        return "lambda_t";
    }
    return "unknown";
}

FitParameter parse_fit_parameter(std::string_view name)
{
    static const std::map<std::string_view, FitParameter> names{
        {"A1", FitParameter::amplitude_a1},          {"amplitude_a1", FitParameter::amplitude_a1},
        {"A2", FitParameter::amplitude_a2},          {"amplitude_a2", FitParameter::amplitude_a2},
        {"c1", FitParameter::weight_c1},             {"c2", FitParameter::weight_c2},
        {"lambda_t", FitParameter::coherence_lambda}, {"coherence_lambda", FitParameter::coherence_lambda},
    };
    if (auto it = names.find(name); it != names.end())
        return it->second;
    throw ConfigError("free", "unknown fit parameter '" + std::string(name) +
                                  "' (expected A1, A2, c1, c2 or lambda_t)");
}

std::string_view to_string(Identifiability identifiability)
{
    switch (identifiability) {
    case Identifiability::identifiable:
        return "identifiable";
    case Identifiability::ratio_only:
        return "ratio-only";
    case Identifiability::unidentifiable:
        return "unidentifiable";
    }
    return "unknown";
}

FitReport compare(const IntensityCurve& model_curve, const ExperimentDataset& data)
{
    if (model_curve.size() == 0)
        throw DataError("model curve is empty");
    const IntensityCurve model = model_curve.normalization() == Normalization::peak_one
                                     ? model_curve
                                     : model_curve.normalized();
    const auto samples = model.samples();
    const auto points = data.points();
    if (points.front().sin_beta < samples.front().sin_beta || points.back().sin_beta > samples.back().sin_beta)
        throw DataError(data.label() + ": data sin_beta range [" + std::to_string(points.front().sin_beta) + ", " +
                        std::to_string(points.back().sin_beta) + "] is not covered by the model curve");
    const double data_peak = peak_of(points);
    if (!(data_peak > 0.0))
        throw DataError(data.label() + ": all intensities are zero");

    FitReport report;
    double sum_sq = 0.0;
    for (const auto& p : points) {
        const double residual = p.intensity / data_peak - model.at(p.sin_beta);
        sum_sq += residual * residual;
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(residual));
    }
    report.points = points.size();
    report.rmse = std::sqrt(sum_sq / static_cast<double>(points.size()));
    // Rounding can leave rmse a hair above the max for constant residuals.
    report.rmse = std::min(report.rmse, report.max_abs_residual);
    return report;
}

std::map<std::string, Identifiability> classify_identifiability(IntensityModel model,
                                                                std::span<const FitParameter> free)
{
    std::set<FitParameter> wanted(free.begin(), free.end());
    std::map<std::string, Identifiability> out;
    if (model == IntensityModel::classical) {
        for (FitParameter p : wanted)
            out[std::string(to_string(p))] = Identifiability::unidentifiable;
        return out;
    }
    // c1 and c2 together are a single angle.
    int ratio_dof = 0;
    ratio_dof += wanted.count(FitParameter::amplitude_a1) ? 1 : 0;
    ratio_dof += wanted.count(FitParameter::amplitude_a2) ? 1 : 0;
    ratio_dof += (wanted.count(FitParameter::weight_c1) || wanted.count(FitParameter::weight_c2)) ? 1 : 0;
    for (FitParameter p : wanted) {
        Identifiability status = Identifiability::identifiable;
        if (in_ratio_group(p))
            status = ratio_dof > 1 ? Identifiability::unidentifiable : Identifiability::ratio_only;
        else if (model != IntensityModel::quantum_decoherent)
            status = Identifiability::unidentifiable;
        out[std::string(to_string(p))] = status;
    }
    return out;
}

FitResult fit_parameters(const ExperimentDataset& data, std::span<const FitParameter> free,
                         const ModelParameters& initial, const FitOptions& options)
{
    if (free.empty())
        throw ConfigError("free", "at least one parameter must be free");

    const ParameterMap map(free, initial, options);
    const std::vector<double> grid = model_grid(data, options.grid_step);

    std::optional<ScanAmplitudes> amplitudes;
    if (options.model != IntensityModel::classical)
        amplitudes = scan_amplitudes(initial.geometry, initial.optics, grid, options.truncation);

    auto curve_for = [&](const ModelParameters& p) {
        if (!amplitudes)
            return classical_curve(p.geometry, p.optics, grid, Normalization::peak_one);
        return quantum_curve(options.model, *amplitudes, p.optics.amplitude_a1(), p.optics.amplitude_a2(), p.weights,
                             p.coherence, Normalization::peak_one);
    };
    auto objective = [&](const std::vector<double>& x) {
        try {
            return compare(curve_for(map.apply(x)), data).rmse;
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    const NelderMeadResult best = minimize_nelder_mead(objective, map.start(), map.steps(), map.lower(), map.upper(), nm);

    FitResult result{compare(curve_for(map.apply(best.x)), data), map.apply(best.x)};
    result.report.iterations = best.iterations;
    result.report.converged = best.converged;
    result.report.identifiability = classify_identifiability(options.model, free);
    std::set<FitParameter> wanted(free.begin(), free.end());
    for (FitParameter p : wanted) {
        const auto name = std::string(to_string(p));
        switch (p) {
        case FitParameter::amplitude_a1:
            result.report.fitted_params[name] = result.parameters.optics.amplitude_a1();
            break;
        case FitParameter::amplitude_a2:
            result.report.fitted_params[name] = result.parameters.optics.amplitude_a2();
            break;
        case FitParameter::weight_c1:
            result.report.fitted_params[name] = result.parameters.weights.c1();
            break;
        case FitParameter::weight_c2:
            result.report.fitted_params[name] = result.parameters.weights.c2();
            break;
        case FitParameter::coherence_lambda:
            result.report.fitted_params[name] = result.parameters.coherence.lambda_t();
            break;
        }
    }
    return result;
}

} // namespace slitdiff
