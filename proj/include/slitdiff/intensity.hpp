#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slitdiff/core.hpp"

namespace slitdiff
{
enum class IntensityModel
{
    quantum_coherent,
    quantum_decoherent,
    classical,
};

enum class Normalization
{
    raw,
    peak_one,
};

std::string_view to_string(IntensityModel model);
std::string_view to_string(Normalization normalization);
// Throw ConfigError("model") / ConfigError("normalization") on unknown names.
IntensityModel parse_intensity_model(std::string_view name);
Normalization parse_normalization(std::string_view name);

// |Phi|^2.
double coherent_intensity(std::complex<double> phi);

// (1 + |alpha|^2) [c1^2 |Phi1|^2 + c2^2 |Phi2|^2 + 2 c1 c2 Lambda Re(conj(Phi1) Phi2)]
double decoherent_intensity(std::complex<double> phi1, std::complex<double> phi2, const SuperpositionWeights& weights,
                            const CoherenceModel& coherence);

// Fraunhofer double slit with I0 = 1:
//   4 sinc^2(pi a sin(beta)/lambda) cos^2(pi d sin(beta)/lambda)
double classical_intensity(const ApertureGeometry& geometry, const OpticalSetup& setup, double sin_beta);

struct CurveSample
{
    double sin_beta = 0.0;
    double intensity = 0.0;
};

// Samples ordered by strictly increasing sin(beta), intensities >= 0.
class IntensityCurve
{
public:
    IntensityCurve(std::vector<CurveSample> samples, Normalization normalization);

    std::span<const CurveSample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    Normalization normalization() const noexcept { return normalization_; }
    double peak() const;

    // Rescaled so the maximum is exactly 1. Throws NumericalError for an all-zero curve.
    IntensityCurve normalized() const;

    // Linear interpolation; throws std::domain_error outside the sampled range.
    double at(double sin_beta) const;

private:
    std::vector<CurveSample> samples_;
    Normalization normalization_;
};

// min, min+step, ..., max (inclusive within half a step). When min is a whole
// multiple of step the nodes are exact multiples, so 0 is hit exactly.
std::vector<double> beta_grid(double min, double max, double step);

// Unit-incident-amplitude far-field amplitudes of both slits on a grid.
// Intensities for any A1, A2, c1, c2, Lambda follow without re-propagation.
struct ScanAmplitudes
{
    std::vector<double> sin_beta;
    std::vector<std::complex<double>> left;
    std::vector<std::complex<double>> right;
};

// Evaluates grid points in parallel; the result does not depend on the thread count.
ScanAmplitudes scan_amplitudes(const ApertureGeometry& geometry, const OpticalSetup& setup,
                               std::span<const double> grid, Truncation truncation, double sin_alpha = 0.0);

IntensityCurve quantum_curve(IntensityModel model, const ScanAmplitudes& amplitudes, double amplitude_a1,
                             double amplitude_a2, const SuperpositionWeights& weights, const CoherenceModel& coherence,
                             Normalization normalization);

IntensityCurve classical_curve(const ApertureGeometry& geometry, const OpticalSetup& setup,
                               std::span<const double> grid, Normalization normalization);

// Throws std::invalid_argument if the grid is empty or not strictly increasing.
IntensityCurve scan_curve(IntensityModel model, const ModelParameters& parameters, std::span<const double> grid,
                          Truncation truncation, Normalization normalization);

struct VisibilityReport
{
    double i_max = 0.0;
    double i_min = 0.0;
    double visibility = 0.0;
    double sin_beta_max = 0.0;
    double sin_beta_min = 0.0;
};

// Central maximum and the first local minimum beside it (larger sin(beta)
// first, then smaller), each refined by a parabola through the neighbouring
// samples. Throws NumericalError when no minimum is bracketed.
VisibilityReport fringe_visibility(const IntensityCurve& curve);

struct TruncationSearch
{
    Truncation truncation;
    double relative_change = 0.0;
    bool converged = false;
};

// Doubles (M, N) from `start` until the integral of the peak-one curve changes
// by less than `tolerance`, or until either count would exceed `max_modes`.
TruncationSearch converge_truncation(IntensityModel model, const ModelParameters& parameters,
                                     std::span<const double> grid, Truncation start = {},
                                     double tolerance = 1e-6, int max_modes = 1024);

} // namespace slitdiff
