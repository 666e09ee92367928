#include "slitdiff/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "slitdiff/diffraction.hpp"

namespace slitdiff
{
namespace
{
using std::numbers::pi;

void check_grid(std::span<const double> grid)
{
    if (grid.empty())
        throw std::invalid_argument("sin(beta) grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sin(beta) grid must be strictly increasing");
}

template <class Body>
void parallel_for(std::size_t count, Body body)
{
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers)
                body(i);
        });
    }
}

// Vertex value of the parabola through three samples, or the middle sample
// when the vertex falls outside them.
double parabola_extremum(std::span<const CurveSample> s, std::size_t i, double* where)
{
    *where = s[i].sin_beta;
    if (i == 0 || i + 1 >= s.size())
        return s[i].intensity;
    const double x0 = s[i - 1].sin_beta - s[i].sin_beta;
    const double x2 = s[i + 1].sin_beta - s[i].sin_beta;
    const double y0 = s[i - 1].intensity;
    const double y1 = s[i].intensity;
    const double y2 = s[i + 1].intensity;
    const double f01 = (y1 - y0) / (0.0 - x0);
    const double f12 = (y2 - y1) / x2;
    const double curvature = (f12 - f01) / (x2 - x0);
    if (curvature == 0.0)
        return y1;
    const double vertex = 0.5 * x0 - f01 / (2.0 * curvature);
    if (vertex < x0 || vertex > x2)
        return y1;
    *where = s[i].sin_beta + vertex;
    return y0 + f01 * (vertex - x0) + curvature * (vertex - x0) * vertex;
}

double trapezoid(const IntensityCurve& curve)
{
    const auto s = curve.samples();
    double total = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        total += 0.5 * (s[i].intensity + s[i - 1].intensity) * (s[i].sin_beta - s[i - 1].sin_beta);
    return total;
}
} // namespace

std::string_view to_string(IntensityModel model)
{
    switch (model) {
    case IntensityModel::quantum_coherent:
        return "quantum-coherent";
    case IntensityModel::quantum_decoherent:
        return "quantum-decoherent";
    case IntensityModel::classical:
        return "classical";
    }
    return "unknown";
}

std::string_view to_string(Normalization normalization)
{
    return normalization == Normalization::raw ? "raw" : "peak-one";
}

IntensityModel parse_intensity_model(std::string_view name)
{
    for (auto model : {IntensityModel::quantum_coherent, IntensityModel::quantum_decoherent, IntensityModel::classical})
        if (to_string(model) == name)
            return model;
    throw ConfigError("model", "unknown model '" + std::string(name) +
                                   "' (expected quantum-coherent, quantum-decoherent or classical)");
}

Normalization parse_normalization(std::string_view name)
{
    if (name == "raw")
        return Normalization::raw;
    if (name == "peak-one")
        return Normalization::peak_one;
    throw ConfigError("normalization", "unknown normalization '" + std::string(name) + "' (expected raw or peak-one)");
}

double coherent_intensity(std::complex<double> phi)
{
    return std::norm(phi);
}

double decoherent_intensity(std::complex<double> phi1, std::complex<double> phi2, const SuperpositionWeights& weights,
                            const CoherenceModel& coherence)
{
    const double c1 = weights.c1();
    const double c2 = weights.c2();
    const double cross = (std::conj(phi1) * phi2).real();
    const double bracket =
        c1 * c1 * std::norm(phi1) + c2 * c2 * std::norm(phi2) + 2.0 * c1 * c2 * coherence.lambda_t() * cross;
    // Cauchy-Schwarz keeps the bracket >= 0 up to rounding.
    return (1.0 + coherence.alpha_sq()) * std::max(0.0, bracket);
}

double classical_intensity(const ApertureGeometry& geometry, const OpticalSetup& setup, double sin_beta)
{
    const double envelope_arg = geometry.width() * sin_beta / setup.wavelength();
    const double fringe_arg = geometry.separation() * sin_beta / setup.wavelength();
    const double envelope = envelope_arg == 0.0 ? 1.0 : sin_pi(envelope_arg) / (pi * envelope_arg);
    const double fringe = cos_pi(fringe_arg);
    return 4.0 * envelope * envelope * fringe * fringe;
}

IntensityCurve::IntensityCurve(std::vector<CurveSample> samples, Normalization normalization)
    : samples_(std::move(samples)), normalization_(normalization)
{
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!(samples_[i].intensity >= 0.0) || !std::isfinite(samples_[i].intensity))
            throw NumericalError("intensity curve sample is negative or not finite");
        if (i > 0 && !(samples_[i].sin_beta > samples_[i - 1].sin_beta))
            throw std::invalid_argument("intensity curve sin(beta) must be strictly increasing");
    }
}

double IntensityCurve::peak() const
{
    double peak = 0.0;
    for (const auto& s : samples_)
        peak = std::max(peak, s.intensity);
    return peak;
}

IntensityCurve IntensityCurve::normalized() const
{
    const double top = peak();
    if (!(top > 0.0))
        throw NumericalError("cannot normalize an intensity curve whose peak is zero");
    std::vector<CurveSample> scaled(samples_.begin(), samples_.end());
    for (auto& s : scaled)
        s.intensity = s.intensity == top ? 1.0 : s.intensity / top;
    return {std::move(scaled), Normalization::peak_one};
}

double IntensityCurve::at(double sin_beta) const
{
    if (samples_.empty() || sin_beta < samples_.front().sin_beta || sin_beta > samples_.back().sin_beta)
        throw std::domain_error("sin(beta) outside the sampled range of the curve");
    const auto upper = std::lower_bound(samples_.begin(), samples_.end(), sin_beta,
                                        [](const CurveSample& s, double v) { return s.sin_beta < v; });
    if (upper->sin_beta == sin_beta)
        return upper->intensity;
    const auto lower = upper - 1;
    const double t = (sin_beta - lower->sin_beta) / (upper->sin_beta - lower->sin_beta);
    return lower->intensity + t * (upper->intensity - lower->intensity);
}

std::vector<double> beta_grid(double min, double max, double step)
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw ConfigError("beta_step", "must be positive");
    if (!(min < max))
        throw ConfigError("beta_min", "must be below beta_max");
    const double span = (max - min) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 0.5)) + 1;
    const double first_index = min / step;
    const double rounded = std::round(first_index);
    const bool aligned = std::abs(first_index - rounded) < 1e-9;

    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(aligned ? (rounded + static_cast<double>(i)) * step : min + static_cast<double>(i) * step);
    return grid;
}

ScanAmplitudes scan_amplitudes(const ApertureGeometry& geometry, const OpticalSetup& setup,
                               std::span<const double> grid, Truncation truncation, double sin_alpha)
{
    check_grid(grid);
    std::vector<DiffractionPoint> points;
    points.reserve(grid.size());
    for (double sb : grid)
        points.push_back(DiffractionPoint::from_sin_beta(sb, setup, sin_alpha));

    const DiffractionModel model(geometry, setup, truncation);
    ScanAmplitudes out;
    out.sin_beta.assign(grid.begin(), grid.end());
    out.left.resize(grid.size());
    out.right.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        out.left[i] = model.unit_amplitude(Slit::left, points[i]);
        out.right[i] = model.unit_amplitude(Slit::right, points[i]);
    });
    return out;
}

IntensityCurve quantum_curve(IntensityModel model, const ScanAmplitudes& amplitudes, double amplitude_a1,
                             double amplitude_a2, const SuperpositionWeights& weights, const CoherenceModel& coherence,
                             Normalization normalization)
{
    if (model == IntensityModel::classical)
        throw std::invalid_argument("quantum_curve: the classical model has no slit amplitudes");
    std::vector<CurveSample> samples;
    samples.reserve(amplitudes.sin_beta.size());
    for (std::size_t i = 0; i < amplitudes.sin_beta.size(); ++i) {
        const std::complex<double> phi1 = amplitude_a1 * amplitudes.left[i];
        const std::complex<double> phi2 = amplitude_a2 * amplitudes.right[i];
        const double value = model == IntensityModel::quantum_coherent
                                 ? coherent_intensity(weights.c1() * phi1 + weights.c2() * phi2)
                                 : decoherent_intensity(phi1, phi2, weights, coherence);
        samples.push_back({amplitudes.sin_beta[i], value});
    }
    IntensityCurve curve(std::move(samples), Normalization::raw);
    return normalization == Normalization::peak_one ? curve.normalized() : curve;
}

IntensityCurve classical_curve(const ApertureGeometry& geometry, const OpticalSetup& setup,
                               std::span<const double> grid, Normalization normalization)
{
    check_grid(grid);
    std::vector<CurveSample> samples;
    samples.reserve(grid.size());
    for (double sb : grid)
        samples.push_back({sb, classical_intensity(geometry, setup, sb)});
    IntensityCurve curve(std::move(samples), Normalization::raw);
    return normalization == Normalization::peak_one ? curve.normalized() : curve;
}

IntensityCurve scan_curve(IntensityModel model, const ModelParameters& parameters, std::span<const double> grid,
                          Truncation truncation, Normalization normalization)
{
    if (model == IntensityModel::classical)
        return classical_curve(parameters.geometry, parameters.optics, grid, normalization);
    const ScanAmplitudes amplitudes = scan_amplitudes(parameters.geometry, parameters.optics, grid, truncation);
    return quantum_curve(model, amplitudes, parameters.optics.amplitude_a1(), parameters.optics.amplitude_a2(),
                         parameters.weights, parameters.coherence, normalization);
}

VisibilityReport fringe_visibility(const IntensityCurve& curve)
{
    const auto s = curve.samples();
    if (s.size() < 3)
        throw NumericalError("fringe visibility needs at least three samples");

    std::size_t top = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].intensity > s[top].intensity ||
            (s[i].intensity == s[top].intensity && std::abs(s[i].sin_beta) < std::abs(s[top].sin_beta)))
            top = i;
    }

    std::size_t bottom = s.size();
    for (std::size_t i = top + 1; i + 1 < s.size(); ++i) {
        if (s[i].intensity <= s[i - 1].intensity && s[i].intensity < s[i + 1].intensity) {
            bottom = i;
            break;
        }
    }
    if (bottom == s.size()) {
        for (std::size_t i = top; i-- > 1;) {
            if (s[i].intensity <= s[i + 1].intensity && s[i].intensity < s[i - 1].intensity) {
                bottom = i;
                break;
            }
        }
    }
    if (bottom == s.size())
        throw NumericalError("grid too coarse or too narrow to bracket a minimum next to the central maximum");

    VisibilityReport report;
    report.i_max = std::max(s[top].intensity, parabola_extremum(s, top, &report.sin_beta_max));
    report.i_min = std::clamp(parabola_extremum(s, bottom, &report.sin_beta_min), 0.0, s[bottom].intensity);
    const double sum = report.i_max + report.i_min;
    report.visibility = sum > 0.0 ? (report.i_max - report.i_min) / sum : 0.0;
    return report;
}

TruncationSearch converge_truncation(IntensityModel model, const ModelParameters& parameters,
                                     std::span<const double> grid, Truncation start, double tolerance, int max_modes)
{
    if (model == IntensityModel::classical)
        return {start, 0.0, true};

    TruncationSearch search{start, 0.0, false};
    double previous = trapezoid(scan_curve(model, parameters, grid, start, Normalization::peak_one));
    while (search.truncation.m_count * 2 <= max_modes && search.truncation.n_count * 2 <= max_modes) {
        const Truncation next{search.truncation.m_count * 2, search.truncation.n_count * 2};
        const double current = trapezoid(scan_curve(model, parameters, grid, next, Normalization::peak_one));
        search.truncation = next;
        search.relative_change = std::abs(current - previous) / std::abs(current);
        if (search.relative_change < tolerance) {
            search.converged = true;
            break;
        }
        previous = current;
    }
    return search;
}

} // namespace slitdiff
