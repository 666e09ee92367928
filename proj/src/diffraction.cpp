#include "slitdiff/diffraction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slitdiff
{
namespace
{
using std::numbers::pi;
constexpr std::complex<double> i_unit{0.0, 1.0};

// Below this the exit-face attenuation of an evanescent mode underflows any
// double-precision sum it could enter.
constexpr double negligible_attenuation = 1e-200;

double sinc(double x)
{
    constexpr double series_limit = 0.5e-6 * pi;
    if (std::abs(x) < series_limit) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}
} // namespace

std::complex<double> sine_transform(double length, int harmonic, double q)
{
    if (harmonic < 1)
        throw std::invalid_argument("sine_transform: harmonic must be a positive integer");
    if (!(length > 0.0))
        throw std::invalid_argument("sine_transform: interval length must be positive");
    // J(-q) = conj(J(q)) for real q.
    if (q < 0.0)
        return std::conj(sine_transform(length, harmonic, -q));

    // With q = kappa + delta and (-1)^N e^{-i N pi} = 1:
    //   J = (1 - e^{-i delta L}) kappa / (kappa^2 - q^2)
    //     = -i L e^{-i delta L/2} sinc(delta L/2) kappa / (kappa + q)
    const double kappa = harmonic * pi / length;
    const double half_phase = 0.5 * (q - kappa) * length;
    return -i_unit * length * std::polar(1.0, -half_phase) * sinc(half_phase) * (kappa / (kappa + q));
}

std::complex<double> aperture_integral_x(double length_b, int harmonic, double q)
{
    return sine_transform(length_b, harmonic, q);
}

std::complex<double> aperture_integral_y(const ApertureGeometry& geometry, int harmonic, double p, Slit slit)
{
    // The right-slit integral is the left one at -p (substitute y -> -y).
    if (slit == Slit::right)
        p = -p;
    // Shift y = v - d/2 - a, v in [0, a]: sin(M pi (v - a)/a) = (-1)^M sin(M pi v/a).
    const double parity = (harmonic % 2 == 0) ? 1.0 : -1.0;
    const double shift = 0.5 * geometry.separation() + geometry.width();
    return parity * std::polar(1.0, p * shift) * sine_transform(geometry.width(), harmonic, p);
}

DiffractionModel::DiffractionModel(const ApertureGeometry& geometry, const OpticalSetup& setup, Truncation truncation)
    : table_(std::make_shared<const ModeTable>(geometry, setup, truncation))
{
    const double thickness = geometry.thickness();
    const std::size_t count =
        static_cast<std::size_t>(truncation.m_count) * static_cast<std::size_t>(truncation.n_count);
    exit_weight_.reserve(count);
    exit_gradient_.reserve(count);
    for (int m = 0; m < truncation.m_count; ++m) {
        for (int n = 0; n < truncation.n_count; ++n) {
            const std::complex<double> kz = table_->kz(m, n);
            const std::complex<double> propagator = std::exp(i_unit * kz * thickness);
            const std::complex<double> weighted = table_->weight(m, n) * propagator;
            exit_weight_.push_back(weighted);
            exit_gradient_.push_back(i_unit * kz * weighted);
        }
        // Attenuation grows with m at fixed n = 0, so trailing rows can be dropped.
        if (std::abs(std::exp(i_unit * table_->kz(m, 0) * thickness)) >= negligible_attenuation)
            active_m_ = m + 1;
    }
}

std::complex<double> DiffractionModel::unit_amplitude(Slit slit, const DiffractionPoint& point) const
{
    const ApertureGeometry& geometry = table_->geometry();
    const Truncation t = table_->truncation();
    const double k = table_->optics().wavenumber();
    const double range = point.range();
    const double q = k * point.sin_alpha();
    const double p = k * point.sin_beta();

    std::vector<std::complex<double>> x_integrals(static_cast<std::size_t>(t.n_count));
    for (int n = 0; n < t.n_count; ++n)
        x_integrals[static_cast<std::size_t>(n)] = aperture_integral_x(geometry.length(), 2 * n + 1, q);

    // Bracket per mode: i kz + (i k - 1/R) sqrt(cos^2 alpha - sin^2 beta).
    const std::complex<double> obliquity_term = (i_unit * k - 1.0 / range) * point.obliquity();

    std::complex<double> total{};
    for (int m = 0; m < active_m_; ++m) {
        const std::size_t row = static_cast<std::size_t>(m) * static_cast<std::size_t>(t.n_count);
        std::complex<double> gradient_sum{};
        std::complex<double> weight_sum{};
        for (int n = 0; n < t.n_count; ++n) {
            const std::complex<double> ix = x_integrals[static_cast<std::size_t>(n)];
            gradient_sum += exit_gradient_[row + static_cast<std::size_t>(n)] * ix;
            weight_sum += exit_weight_[row + static_cast<std::size_t>(n)] * ix;
        }
        total += aperture_integral_y(geometry, 2 * m + 1, p, slit) * (gradient_sum + obliquity_term * weight_sum);
    }

    const std::complex<double> spherical = -std::polar(1.0, k * range) / (4.0 * pi * range);
    const std::complex<double> exit_phase = std::polar(1.0, -k * point.cos_theta() * geometry.thickness());
    return spherical * exit_phase * total;
}

SlitAmplitude DiffractionModel::amplitude(Slit slit, const DiffractionPoint& point) const
{
    return {table_->optics().amplitude(slit) * unit_amplitude(slit, point), slit, point};
}

SlitAmplitude slit_amplitude(const ApertureGeometry& geometry, const OpticalSetup& setup, Slit slit,
                             const DiffractionPoint& point, Truncation truncation)
{
    return DiffractionModel(geometry, setup, truncation).amplitude(slit, point);
}

std::complex<double> superpose(const SlitAmplitude& phi1, const SlitAmplitude& phi2,
                               const SuperpositionWeights& weights)
{
    if (!(phi1.point == phi2.point))
        throw std::invalid_argument("superpose: amplitudes evaluated at different diffraction points");
    return weights.c1() * phi1.value + weights.c2() * phi2.value;
}

} // namespace slitdiff
