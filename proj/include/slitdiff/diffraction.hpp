#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "slitdiff/core.hpp"
#include "slitdiff/slit_modes.hpp"

namespace slitdiff
{
// Integral of e^{-i q x} sin(N pi x / L) over [0, L] for integer N >= 1.
//
// Written around whichever resonance q = +-N pi/L is nearer, so the closed
// form has no cancellation anywhere; within 1e-6 pi/L of a resonance the
// sinc factor switches to its Taylor series.
std::complex<double> sine_transform(double length, int harmonic, double q);

// x-direction aperture integral: int_0^b e^{-i q x} sin(N pi x / b) dx, q = k sin(alpha).
std::complex<double> aperture_integral_x(double length_b, int harmonic, double q);

// y-direction aperture integral over the chosen slit, p = k sin(beta):
//   left:  int_{-d/2-a}^{-d/2}  e^{-i p y} sin(M pi (d/2 + y)/a) dy
//   right: int_{d/2}^{d/2+a}    e^{-i p y} sin(M pi (d/2 - y)/a) dy
std::complex<double> aperture_integral_y(const ApertureGeometry& geometry, int harmonic, double p, Slit slit);

struct SlitAmplitude
{
    std::complex<double> value;
    Slit slit = Slit::left;
    DiffractionPoint point;
};

// Far-field amplitude of each slit from the Kirchhoff integral over the exit
// face z = c'. Mode data is computed once per parameter set; amplitude() is
// const and safe to call concurrently.
class DiffractionModel
{
public:
    DiffractionModel(const ApertureGeometry& geometry, const OpticalSetup& setup, Truncation truncation);

    // Amplitude for unit incident amplitude; the physical amplitude is linear in A.
    std::complex<double> unit_amplitude(Slit slit, const DiffractionPoint& point) const;
    SlitAmplitude amplitude(Slit slit, const DiffractionPoint& point) const;

    const ModeTable& modes() const noexcept { return *table_; }
    // Leading y-modes whose attenuation through the slit is representable.
    int active_m_count() const noexcept { return active_m_; }

private:
    std::shared_ptr<const ModeTable> table_;
    int active_m_ = 0;
    // Per mode: w e^{i kz c'} and i kz w e^{i kz c'}.
    std::vector<std::complex<double>> exit_weight_;
    std::vector<std::complex<double>> exit_gradient_;
};

SlitAmplitude slit_amplitude(const ApertureGeometry& geometry, const OpticalSetup& setup, Slit slit,
                             const DiffractionPoint& point, Truncation truncation);

// c1 Phi1 + c2 Phi2. Throws std::invalid_argument for amplitudes at different points.
std::complex<double> superpose(const SlitAmplitude& phi1, const SlitAmplitude& phi2,
                               const SuperpositionWeights& weights);

} // namespace slitdiff
