#include "slitdiff/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slitdiff
{
namespace
{
void require_positive(double value, const char* key)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError(key, "must be a finite positive length, got " + std::to_string(value));
}

void require_finite(double value, const char* key)
{
    if (!std::isfinite(value))
        throw ConfigError(key, "must be finite");
}
} // namespace

const char* to_string(Slit slit)
{
    return slit == Slit::left ? "left" : "right";
}

ApertureGeometry::ApertureGeometry(double slit_width_a, double slit_length_b, double separation_d,
                                   double thickness_c)
    : width_(slit_width_a), length_(slit_length_b), separation_(separation_d), thickness_(thickness_c)
{
    require_positive(width_, "slit_width_a");
    require_positive(length_, "slit_length_b");
    require_positive(separation_, "separation_d");
    require_positive(thickness_, "thickness_c");
}

double ApertureGeometry::inner_wall(Slit slit) const noexcept
{
    const double half = 0.5 * separation_;
    return slit == Slit::left ? -half : half;
}

double ApertureGeometry::outer_wall(Slit slit) const noexcept
{
    const double half = 0.5 * separation_;
    return slit == Slit::left ? -half - width_ : half + width_;
}

OpticalSetup::OpticalSetup(double wavelength, double amplitude_a1, double amplitude_a2,
                           double screen_distance)
    : wavelength_(wavelength), amplitude_a1_(amplitude_a1), amplitude_a2_(amplitude_a2),
      screen_distance_(screen_distance)
{
    require_positive(wavelength_, "wavelength");
    require_finite(amplitude_a1_, "amplitude_a1");
    require_finite(amplitude_a2_, "amplitude_a2");
    require_positive(screen_distance_, "screen_distance");
}

void check_compatible(const ApertureGeometry& geometry, const OpticalSetup& setup)
{
    if (!(setup.wavelength() < 2.0 * geometry.width()))
        throw ConfigError("wavelength", "must be shorter than twice slit_width_a (no propagating mode)");
}

SuperpositionWeights::SuperpositionWeights(double c1, double c2) : c1_(c1), c2_(c2)
{
    require_finite(c1_, "c1");
    require_finite(c2_, "c2");
    const double norm = c1_ * c1_ + c2_ * c2_;
    if (std::abs(norm - 1.0) > normalization_tolerance)
        throw ConfigError("c1", "c1^2 + c2^2 = " + std::to_string(norm) + " is not 1 within 1e-3");
}

CoherenceModel::CoherenceModel(double lambda_t) : lambda_t_(lambda_t), alpha_sq_(0.0)
{
    if (!(lambda_t >= 0.0 && lambda_t <= 1.0))
        throw ConfigError("coherence_lambda", "must lie in [0, 1]");
    alpha_sq_ = lambda_t / (2.0 - lambda_t);
}

Truncation::Truncation(int m, int n) : m_count(m), n_count(n)
{
    if (m < 1)
        throw ConfigError("truncation_m", "must be at least 1");
    if (n < 1)
        throw ConfigError("truncation_n", "must be at least 1");
}

DiffractionPoint::DiffractionPoint(double sin_alpha, double sin_beta, double range)
    : sin_alpha_(sin_alpha), sin_beta_(sin_beta), cos_theta_(0.0), range_(range)
{
    const double transverse = sin_alpha * sin_alpha + sin_beta * sin_beta;
    if (!(transverse <= 1.0))
        throw std::domain_error("sin^2(alpha) + sin^2(beta) exceeds 1: unphysical direction");
    cos_theta_ = std::sqrt(1.0 - transverse);
}

DiffractionPoint DiffractionPoint::from_screen(double s, const OpticalSetup& setup, double sin_alpha)
{
    const double range = std::hypot(setup.screen_distance(), s);
    return {sin_alpha, s / range, range};
}

DiffractionPoint DiffractionPoint::from_sin_beta(double sin_beta, const OpticalSetup& setup,
                                                 double sin_alpha)
{
    if (!(std::abs(sin_beta) < 1.0))
        throw std::domain_error("|sin(beta)| must be below 1 for a screen at finite distance");
    const double cos_beta = std::sqrt((1.0 - sin_beta) * (1.0 + sin_beta));
    return {sin_alpha, sin_beta, setup.screen_distance() / cos_beta};
}

double DiffractionPoint::obliquity() const noexcept
{
    const double cos_alpha_sq = (1.0 - sin_alpha_) * (1.0 + sin_alpha_);
    return std::sqrt(std::max(0.0, cos_alpha_sq - sin_beta_ * sin_beta_));
}

ModelParameters reference_parameters()
{
    return {
        ApertureGeometry{1.3e-4, 4.4e-3, 4e-4, 8.5e-5},
        OpticalSetup{916e-9, 160.9, 159.3, 4.0},
        SuperpositionWeights{0.715, 0.699},
        CoherenceModel{0.873},
    };
}

double sin_pi(double x)
{
    double sign = 1.0;
    if (x < 0.0) {
        x = -x;
        sign = -1.0;
    }
    double r = std::fmod(x, 2.0);
    if (r > 1.0) {
        r -= 1.0;
        sign = -sign;
    }
    if (r > 0.5)
        r = 1.0 - r;
    return sign * std::sin(std::numbers::pi * r);
}

double cos_pi(double x)
{
    return sin_pi(std::abs(x) + 0.5);
}

} // namespace slitdiff
