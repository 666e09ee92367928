#include "slitdiff/slit_modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slitdiff
{
namespace
{
using std::numbers::pi;

std::complex<double> branch_sqrt(double radicand)
{
    if (radicand >= 0.0)
        return {std::sqrt(radicand), 0.0};
    return {0.0, std::sqrt(-radicand)};
}
} // namespace

double mode_weight(ModeIndex mode)
{
    return 16.0 / (static_cast<double>(mode.y_harmonic()) * mode.x_harmonic() * pi * pi);
}

ModeCoefficients fourier_coefficients(const ApertureGeometry& geometry, double amplitude, ModeIndex mode)
{
    if (!std::isfinite(amplitude))
        throw std::invalid_argument("fourier_coefficients: amplitude must be finite");
    const double scale = -amplitude * mode_weight(mode);
    const double phase = mode.y_harmonic() * geometry.separation() / (2.0 * geometry.width());
    return {scale * sin_pi(phase), scale * cos_pi(phase), mode};
}

LongitudinalWavenumber longitudinal_wavenumber(const ApertureGeometry& geometry, const OpticalSetup& setup,
                                               ModeIndex mode)
{
    const double k = setup.wavenumber();
    const double ky = mode.y_harmonic() * pi / geometry.width();
    const double kx = mode.x_harmonic() * pi / geometry.length();
    return {branch_sqrt(k * k - ky * ky - kx * kx)};
}

int propagating_y_modes(const ApertureGeometry& geometry, const OpticalSetup& setup)
{
    int count = 0;
    while (longitudinal_wavenumber(geometry, setup, {count, 0}).propagating())
        ++count;
    return count;
}

double x_profile(const ApertureGeometry& geometry, int harmonic, double x)
{
    return sin_pi(harmonic * (x / geometry.length()));
}

double y_profile(const ApertureGeometry& geometry, Slit slit, int harmonic, double y)
{
    // u = d/2 + y (left) or d/2 - y (right) runs over [-a, 0];
    // v = u + a runs over [0, a]. sin(M pi u/a) = (-1)^M sin(M pi v/a).
    const double sign = slit == Slit::left ? 1.0 : -1.0;
    const double u = sign * (y - geometry.inner_wall(slit));
    const double v = sign * (y - geometry.outer_wall(slit));
    const double a = geometry.width();
    if (std::abs(u) <= std::abs(v))
        return sin_pi(harmonic * (u / a));
    const double parity = (harmonic % 2 == 0) ? 1.0 : -1.0;
    return parity * sin_pi(harmonic * (v / a));
}

ModeTable::ModeTable(const ApertureGeometry& geometry, const OpticalSetup& setup, Truncation truncation)
    : geometry_(geometry), optics_(setup), truncation_(truncation)
{
    check_compatible(geometry, setup);
    const auto count = static_cast<std::size_t>(truncation.m_count) * static_cast<std::size_t>(truncation.n_count);
    weights_.reserve(count);
    kz_.reserve(count);
    for (int m = 0; m < truncation.m_count; ++m) {
        for (int n = 0; n < truncation.n_count; ++n) {
            weights_.push_back(mode_weight({m, n}));
            kz_.push_back(longitudinal_wavenumber(geometry, setup, {m, n}).value);
        }
    }
}

SlitField::SlitField(const ApertureGeometry& geometry, const OpticalSetup& setup, Slit slit, Truncation truncation)
    : SlitField(std::make_shared<const ModeTable>(geometry, setup, truncation), slit)
{
}

SlitField::SlitField(std::shared_ptr<const ModeTable> table, Slit slit) : table_(std::move(table)), slit_(slit)
{
    if (!table_)
        throw std::invalid_argument("SlitField: null mode table");
}

SlitField::Plane SlitField::plane(double z) const
{
    if (!(z >= 0.0 && z <= table_->geometry().thickness()))
        throw std::domain_error("slit field is only defined for 0 <= z <= thickness_c");
    return Plane(*this, z);
}

std::complex<double> SlitField::operator()(const SlitPoint& point) const
{
    return plane(point.z)(point.x, point.y);
}

SlitField::Plane::Plane(const SlitField& field, double z) : table_(field.table_), slit_(field.slit_), z_(z)
{
    const ModeTable& table = *table_;
    const Truncation t = table.truncation();
    const double amplitude = table.optics().amplitude(slit_);
    const std::complex<double> i{0.0, 1.0};
    coefficients_.reserve(static_cast<std::size_t>(t.m_count) * static_cast<std::size_t>(t.n_count));
    for (int m = 0; m < t.m_count; ++m)
        for (int n = 0; n < t.n_count; ++n)
            coefficients_.push_back(-amplitude * table.weight(m, n) * std::exp(i * table.kz(m, n) * z));
}

std::complex<double> SlitField::Plane::operator()(double x, double y) const
{
    const ModeTable& table = *table_;
    const Truncation t = table.truncation();
    const ApertureGeometry& geometry = table.geometry();

    std::vector<double> sx(static_cast<std::size_t>(t.n_count));
    for (int n = 0; n < t.n_count; ++n)
        sx[static_cast<std::size_t>(n)] = x_profile(geometry, 2 * n + 1, x);

    std::complex<double> total{};
    const std::complex<double>* row = coefficients_.data();
    for (int m = 0; m < t.m_count; ++m, row += t.n_count) {
        const double sy = y_profile(geometry, slit_, 2 * m + 1, y);
        if (sy == 0.0)
            continue;
        std::complex<double> inner{};
        for (int n = 0; n < t.n_count; ++n)
            inner += row[n] * sx[static_cast<std::size_t>(n)];
        total += sy * inner;
    }
    return total;
}

std::complex<double> slit_wavefunction(const ApertureGeometry& geometry, const OpticalSetup& setup, Slit slit,
                                       const SlitPoint& point, Truncation truncation)
{
    return SlitField(geometry, setup, slit, truncation)(point);
}

} // namespace slitdiff
