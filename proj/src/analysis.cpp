#include "latkick/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace latkick {

namespace {

constexpr double kPi = std::numbers::pi;

// Iterative radix-2 FFT, input zero-padded by the caller.
void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::vector<double> moving_average(std::span<const double> series, int window) {
  if (window < 1 || window % 2 == 0) {
    throw validation_error("moving_average: window must be odd and >= 1");
  }
  if (static_cast<std::size_t>(window) > series.size()) {
    throw validation_error("moving_average: window exceeds series length");
  }
  const std::size_t n = series.size();
  const std::size_t half = static_cast<std::size_t>(window) / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = std::min({half, i, n - 1 - i});
    double acc = 0.0;
    for (std::size_t j = i - k; j <= i + k; ++j) acc += series[j];
    out[i] = acc / static_cast<double>(2 * k + 1);
  }
  return out;
}

OscillationMetrics extract_amplitude(std::span<const double> series, int window) {
  const auto smoothed = moving_average(series, window);
  const auto [lo, hi] = std::minmax_element(smoothed.begin(), smoothed.end());
  OscillationMetrics m;
  m.amplitude = 0.5 * (*hi - *lo);
  m.smoothing_window = window;
  m.method = "half_peak_to_peak_smoothed";
  return m;
}

OscillationMetrics extract_amplitude(const TimeSeries& ts, int window) {
  return extract_amplitude(std::span<const double>(ts.mean_x), window);
}

OscillationMetrics extract_frequency(std::span<const double> series, double dt_sample) {
  if (series.size() < 8) {
    throw validation_error("extract_frequency: series too short");
  }
  if (dt_sample <= 0.0) throw validation_error("extract_frequency: dt_sample must be > 0");
  const std::size_t n = series.size();

  // detrend: remove the least-squares line so DC and drift do not mask peaks
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += series[i];
    sxx += x * x;
    sxy += x * series[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double icept = (sy - slope * sx) / static_cast<double>(n);

  double raw_scale = 0.0;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = series[i] - (icept + slope * static_cast<double>(i));
    raw_scale = std::max(raw_scale, std::abs(series[i]));
  }
  double detrended_scale = 0.0;
  for (double v : y) detrended_scale = std::max(detrended_scale, std::abs(v));
  if (detrended_scale <= 1e-12 * std::max(raw_scale, 1e-300)) {
    throw numerical_error("extract_frequency: no oscillatory component (flat spectrum)");
  }

  // Hann window, 8x zero padding, parabolic refinement on log power
  const std::size_t nfft = next_pow2(n * 8);
  std::vector<std::complex<double>> buf(nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (n - 1)));
    buf[i] = y[i] * w;
  }
  fft_inplace(buf);

  const double record = static_cast<double>(n) * dt_sample;
  const double dw = 2.0 * kPi / (static_cast<double>(nfft) * dt_sample);
  // skip bins blurred into DC by the window main lobe; a valid record holds
  // >= 2 periods of the target, so this cannot discard it
  const std::size_t k_min =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(1.2 * (2.0 * kPi / record) / dw)));
  const std::size_t k_max = nfft / 2;
  if (k_min >= k_max) throw validation_error("extract_frequency: record too short");

  std::size_t peak = k_min;
  double peak_p = -1.0;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const double p = std::norm(buf[k]);
    if (p > peak_p) {
      peak_p = p;
      peak = k;
    }
  }
  if (peak_p <= 0.0) {
    throw numerical_error("extract_frequency: no oscillatory component (flat spectrum)");
  }

  double delta = 0.0;
  if (peak > k_min && peak < k_max) {
    const double la = std::log(std::norm(buf[peak - 1]) + 1e-300);
    const double lb = std::log(peak_p + 1e-300);
    const double lc = std::log(std::norm(buf[peak + 1]) + 1e-300);
    const double curv = la - 2.0 * lb + lc;
    if (curv < 0.0) delta = std::clamp(0.5 * (la - lc) / curv, -0.5, 0.5);
  }

  OscillationMetrics m;
  m.frequency = (static_cast<double>(peak) + delta) * dw;
  m.method = "hann_periodogram_parabolic";
  return m;
}

OscillationMetrics extract_frequency(const TimeSeries& ts) {
  if (ts.times.size() >= 2) {
    return extract_frequency(std::span<const double>(ts.mean_x),
                             ts.times[1] - ts.times[0]);
  }
  throw validation_error("extract_frequency: time series too short");
}

int default_smoothing_window(const TimeSeries& ts) {
  if (ts.times.size() < 8) return 1;
  const double dt = ts.times[1] - ts.times[0];
  double period = 0.0;
  try {
    period = 2.0 * kPi / extract_frequency(ts).frequency;
  } catch (const numerical_error&) {
    return 1;
  }
  int w = static_cast<int>(std::lround(period / 20.0 / dt));
  w |= 1;
  const int n = static_cast<int>(ts.mean_x.size());
  if (w > n) w = (n % 2 == 1) ? n : n - 1;
  return std::max(w, 1);
}

FitResult linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw validation_error("linear_fit: length mismatch");
  if (x.size() < 2) throw validation_error("linear_fit: need at least two points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw validation_error("linear_fit: x values are all equal");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.residuals.resize(n);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += fit.residuals[i] * fit.residuals[i];
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

double tb_frequency(double ka, double hop_J, int n_sites, double hbar) {
  if (n_sites < 2) throw validation_error("tb_frequency: n_sites must be >= 2");
  if (hbar <= 0.0) throw validation_error("tb_frequency: hbar must be > 0");
  return 2.0 * kPi / (n_sites - 1) * (hop_J / hbar) * std::sin(ka);
}

CondensateCalibration::CondensateCalibration(double amp_sf, double amp_mi, double n_mi)
    : amp_sf_(amp_sf), amp_mi_(amp_mi), n_mi_(n_mi) {
  if (amp_mi < 0.0 || amp_sf <= amp_mi) {
    throw validation_error("calibrate_condensate_probe: calibration points not separated "
                           "(need amp_sf > amp_mi >= 0)");
  }
  if (n_mi <= 0.0 || n_mi >= 1.0) {
    throw validation_error("calibrate_condensate_probe: n_mi must lie in (0, 1)");
  }
}

CondensateCalibration::Estimate CondensateCalibration::estimate(double amplitude) const {
  const double n =
      n_mi_ + (1.0 - n_mi_) * (amplitude - amp_mi_) / (amp_sf_ - amp_mi_);
  return {std::clamp(n, 0.0, 1.0), n >= 0.0 && n <= 1.0};
}

CondensateCalibration calibrate_condensate_probe(double amp_sf, double amp_mi, double n_mi) {
  return CondensateCalibration(amp_sf, amp_mi, n_mi);
}

}  // namespace latkick
