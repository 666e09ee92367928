#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "slitdiff/core.hpp"

namespace slitdiff
{
// Coefficients of cos((2m+1)pi y/a) and sin((2m+1)pi y/a) in the in-slit
// expansion of a plane wave of amplitude A. Together they collapse to
//   D cos(M pi y/a) + D' sin(M pi y/a) = -16A/(M N pi^2) sin(M pi (d/2 + y)/a).
struct ModeCoefficients
{
    double d = 0.0;
    double d_prime = 0.0;
    ModeIndex mode;
};

ModeCoefficients fourier_coefficients(const ApertureGeometry& geometry, double amplitude, ModeIndex mode);

// 16 / ((2m+1)(2n+1) pi^2): magnitude bound of both coefficients per unit amplitude.
double mode_weight(ModeIndex mode);

// k_z of a slit mode. Evanescent modes take the +i branch so they decay along +z.
struct LongitudinalWavenumber
{
    std::complex<double> value;

    bool propagating() const noexcept { return value.imag() == 0.0; }
};

LongitudinalWavenumber longitudinal_wavenumber(const ApertureGeometry& geometry, const OpticalSetup& setup,
                                               ModeIndex mode);

// Number of y-modes m (at n = 0) with a real longitudinal wavenumber.
int propagating_y_modes(const ApertureGeometry& geometry, const OpticalSetup& setup);

// sin((2m+1) pi x / b): the x profile, zero at both ends of the slit.
double x_profile(const ApertureGeometry& geometry, int harmonic, double x);

// sin(M pi (d/2 + y)/a) for the left slit, sin(M pi (d/2 - y)/a) for the right.
// Evaluated from the nearer wall so the value is exactly zero on either wall.
double y_profile(const ApertureGeometry& geometry, Slit slit, int harmonic, double y);

// Per-mode data that depends only on geometry, wavelength and truncation.
// Row-major in (m, n). Shared read-only between slits and threads.
class ModeTable
{
public:
    ModeTable(const ApertureGeometry& geometry, const OpticalSetup& setup, Truncation truncation);

    const ApertureGeometry& geometry() const noexcept { return geometry_; }
    const OpticalSetup& optics() const noexcept { return optics_; }
    Truncation truncation() const noexcept { return truncation_; }

    double weight(int m, int n) const { return weights_[index(m, n)]; }
    std::complex<double> kz(int m, int n) const { return kz_[index(m, n)]; }

private:
    std::size_t index(int m, int n) const
    {
        return static_cast<std::size_t>(m) * static_cast<std::size_t>(truncation_.n_count) +
               static_cast<std::size_t>(n);
    }

    ApertureGeometry geometry_;
    OpticalSetup optics_;
    Truncation truncation_;
    std::vector<double> weights_;
    std::vector<std::complex<double>> kz_;
};

struct SlitPoint
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Truncated modal field inside one slit, evaluated at t = 0.
class SlitField
{
public:
    // Field restricted to a fixed depth z; precomputes the z phases once.
    class Plane
    {
    public:
        std::complex<double> operator()(double x, double y) const;
        double z() const noexcept { return z_; }

    private:
        friend class SlitField;
        Plane(const SlitField& field, double z);

        std::shared_ptr<const ModeTable> table_;
        Slit slit_;
        double z_;
        std::vector<std::complex<double>> coefficients_;
    };

    SlitField(const ApertureGeometry& geometry, const OpticalSetup& setup, Slit slit, Truncation truncation);
    SlitField(std::shared_ptr<const ModeTable> table, Slit slit);

    // Throws std::domain_error unless 0 <= z <= c'.
    Plane plane(double z) const;
    std::complex<double> operator()(const SlitPoint& point) const;

    Slit slit() const noexcept { return slit_; }
    const ModeTable& table() const noexcept { return *table_; }

private:
    std::shared_ptr<const ModeTable> table_;
    Slit slit_;
};

std::complex<double> slit_wavefunction(const ApertureGeometry& geometry, const OpticalSetup& setup, Slit slit,
                                       const SlitPoint& point, Truncation truncation);

} // namespace slitdiff
