#pragma once

// Signal processing and fitting for sampled observables: moving-average
// smoothing, amplitude and frequency extraction from <x>(t), least-squares
// lines, the tight-binding frequency law, and the two-point condensate
// calibration map.

#include <span>
#include <string>
#include <vector>

#include "latkick/dynamics.hpp"
#include "latkick/errors.hpp"

namespace latkick {

struct OscillationMetrics {
  double amplitude = 0.0;     // length, units of the series (here: a)
  double frequency = 0.0;     // rad/s
  int smoothing_window = 1;   // samples
  std::string method;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

/// Centered moving mean; edges shrink the window symmetrically so the output
/// has the input length. `window` must be odd and no longer than the series.
std::vector<double> moving_average(std::span<const double> series, int window);

/// Half the peak-to-peak range of the smoothed series.
OscillationMetrics extract_amplitude(std::span<const double> series, int window);
OscillationMetrics extract_amplitude(const TimeSeries& ts, int window);

/// Dominant nonzero frequency of the detrended series: Hann-windowed
/// periodogram peak refined by local parabolic interpolation. Throws
/// numerical_error when no peak stands out (flat or DC-only input).
OscillationMetrics extract_frequency(std::span<const double> series, double dt_sample);
OscillationMetrics extract_frequency(const TimeSeries& ts);

/// Smoothing window spanning 1/20 of the dominant period, rounded odd;
/// falls back to 1 when the series has no oscillatory component.
int default_smoothing_window(const TimeSeries& ts);

/// Ordinary least squares y = slope * x + intercept.
FitResult linear_fit(std::span<const double> x, std::span<const double> y);

/// omega = (2 pi / (n_sites - 1)) * (J / hbar) * sin(ka).
double tb_frequency(double ka, double hop_J, int n_sites, double hbar = 1.0);

/// Affine inverse of the two-anchor amplitude model: maps an amplitude to the
/// condensate-fraction estimate n(A) = n_mi + (1 - n_mi)(A - amp_mi)/(amp_sf - amp_mi),
/// clamped to [0, 1] with an out-of-range flag.
class CondensateCalibration {
 public:
  CondensateCalibration(double amp_sf, double amp_mi, double n_mi);

  struct Estimate {
    double condensate_fraction;
    bool in_range;
  };
  Estimate estimate(double amplitude) const;

  double amp_sf() const { return amp_sf_; }
  double amp_mi() const { return amp_mi_; }
  double n_mi() const { return n_mi_; }

 private:
  double amp_sf_;
  double amp_mi_;
  double n_mi_;
};

CondensateCalibration calibrate_condensate_probe(double amp_sf, double amp_mi, double n_mi);

}  // namespace latkick
