#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace slitdiff
{
// Error hierarchy. The CLI maps these onto exit codes.
struct ConfigError : std::invalid_argument
{
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(key + ": " + message), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct DataError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

enum class Slit
{
    left,
    right,
};

const char* to_string(Slit slit);

// Double-slit aperture in an infinite opaque screen of thickness c'.
// The x axis runs along the slit length b, the y axis across the width a;
// slits occupy [-d/2-a, -d/2] (left) and [d/2, d/2+a] (right).
class ApertureGeometry
{
public:
    ApertureGeometry(double slit_width_a, double slit_length_b, double separation_d,
                     double thickness_c);

    double width() const noexcept { return width_; }
    double length() const noexcept { return length_; }
    double separation() const noexcept { return separation_; }
    double thickness() const noexcept { return thickness_; }

    // Wall closest to the optical axis, and the far wall.
    double inner_wall(Slit slit) const noexcept;
    double outer_wall(Slit slit) const noexcept;

    friend bool operator==(const ApertureGeometry&, const ApertureGeometry&) = default;

private:
    double width_;
    double length_;
    double separation_;
    double thickness_;
};

// Incident beam and screen. The polarization components share one scalar
// amplitude per slit; summing them only rescales every intensity.
class OpticalSetup
{
public:
    OpticalSetup(double wavelength, double amplitude_a1, double amplitude_a2,
                 double screen_distance);

    double wavelength() const noexcept { return wavelength_; }
    double wavenumber() const noexcept { return 2.0 * std::numbers::pi / wavelength_; }
    double amplitude(Slit slit) const noexcept { return slit == Slit::left ? amplitude_a1_ : amplitude_a2_; }
    double amplitude_a1() const noexcept { return amplitude_a1_; }
    double amplitude_a2() const noexcept { return amplitude_a2_; }
    double screen_distance() const noexcept { return screen_distance_; }

    friend bool operator==(const OpticalSetup&, const OpticalSetup&) = default;

private:
    double wavelength_;
    double amplitude_a1_;
    double amplitude_a2_;
    double screen_distance_;
};

// Throws ConfigError("wavelength") unless at least one y-mode propagates.
void check_compatible(const ApertureGeometry& geometry, const OpticalSetup& setup);

// Superposition coefficients c1, c2 with c1^2 + c2^2 = 1.
class SuperpositionWeights
{
public:
    static constexpr double normalization_tolerance = 1e-3;

    SuperpositionWeights(double c1, double c2);

    double c1() const noexcept { return c1_; }
    double c2() const noexcept { return c2_; }

    friend bool operator==(const SuperpositionWeights&, const SuperpositionWeights&) = default;

private:
    double c1_;
    double c2_;
};

// Quantum coherence degree Lambda_t and the environment overlap
// |alpha_t|^2 it implies through Lambda = 2|alpha|^2 / (1 + |alpha|^2).
class CoherenceModel
{
public:
    explicit CoherenceModel(double lambda_t);

    double lambda_t() const noexcept { return lambda_t_; }
    double alpha_sq() const noexcept { return alpha_sq_; }

    friend bool operator==(const CoherenceModel&, const CoherenceModel&) = default;

private:
    double lambda_t_;
    double alpha_sq_;
};

// Selects the odd harmonics (2m+1) across the slit width and (2n+1) along its length.
struct ModeIndex
{
    int m = 0;
    int n = 0;

    int y_harmonic() const noexcept { return 2 * m + 1; }
    int x_harmonic() const noexcept { return 2 * n + 1; }
};

// Number of modes kept in each direction: m < m_count, n < n_count.
struct Truncation
{
    int m_count = 64;
    int n_count = 64;

    Truncation() = default;
    Truncation(int m, int n);

    friend bool operator==(const Truncation&, const Truncation&) = default;
};

// Far-field observation direction, given by its direction sines.
class DiffractionPoint
{
public:
    // Screen coordinate s along y at distance l: R = sqrt(l^2 + s^2), sin(beta) = s / R.
    static DiffractionPoint from_screen(double s, const OpticalSetup& setup, double sin_alpha = 0.0);
    // Same geometry parameterized by sin(beta) directly, R = l / cos(beta).
    static DiffractionPoint from_sin_beta(double sin_beta, const OpticalSetup& setup,
                                          double sin_alpha = 0.0);

    double sin_alpha() const noexcept { return sin_alpha_; }
    double sin_beta() const noexcept { return sin_beta_; }
    double cos_theta() const noexcept { return cos_theta_; }
    double range() const noexcept { return range_; }

    // sqrt(cos^2 alpha - sin^2 beta), the obliquity as it appears in the
    // far-field bracket. Equal to cos_theta() by the direction-cosine identity.
    double obliquity() const noexcept;

    friend bool operator==(const DiffractionPoint&, const DiffractionPoint&) = default;

private:
    DiffractionPoint(double sin_alpha, double sin_beta, double range);

    double sin_alpha_;
    double sin_beta_;
    double cos_theta_;
    double range_;
};

// Everything a model evaluation needs.
struct ModelParameters
{
    ApertureGeometry geometry;
    OpticalSetup optics;
    SuperpositionWeights weights;
    CoherenceModel coherence;
};

// Parameters of the 916 nm double-slit experiment used throughout the tests
// and as the CLI default.
ModelParameters reference_parameters();

// Exact-at-integers sin(pi x) and cos(pi x).
double sin_pi(double x);
double cos_pi(double x);

} // namespace slitdiff
