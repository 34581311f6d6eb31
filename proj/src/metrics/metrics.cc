// src/metrics/metrics.cc

// Copyright 2026  The latent-tta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tta/metrics/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "tta/base/error.h"
#include "tta/signal/fft.h"

namespace tta::metrics {
namespace {

void CheckPair(const signal::Waveform &ref, const signal::Waveform &est) {
  signal::CheckWaveform(ref);
  signal::CheckWaveform(est);
  TTA_REQUIRE(ref.size() == est.size(), ErrorCode::kInvalidArgument,
              "reference and estimate differ in length");
  TTA_REQUIRE(ref.sample_rate == est.sample_rate, ErrorCode::kInvalidArgument,
              "reference and estimate differ in sample rate");
}

// Symmetric Hann of the reference implementations:
// 0.5 (1 - cos(2 pi n / (N + 1))), n = 1..N.
std::vector<double> RefHann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                 static_cast<double>(i + 1) /
                                 static_cast<double>(n + 1)));
  return w;
}

// Number of whole frames on the grid; at least one when the signal is
// shorter than a frame (that frame is zero-padded).
std::size_t FrameCount(std::size_t n, std::size_t frame_len, std::size_t hop) {
  if (n <= frame_len) return 1;
  return (n - frame_len) / hop + 1;
}

std::vector<double> WindowedFrame(const std::vector<double> &x,
                                  std::size_t start,
                                  const std::vector<double> &win) {
  std::vector<double> f(win.size(), 0.0);
  for (std::size_t i = 0; i < win.size() && start + i < x.size(); ++i)
    f[i] = x[start + i] * win[i];
  return f;
}

std::vector<double> Autocorrelation(const std::vector<double> &f,
                                    std::size_t order) {
  std::vector<double> r(order + 1, 0.0);
  for (std::size_t k = 0; k <= order; ++k)
    for (std::size_t i = k; i < f.size(); ++i) r[k] += f[i] * f[i - k];
  return r;
}

// Levinson-Durbin.  Returns false for a singular or non-positive-definite
// autocorrelation.  a[0] = 1.
bool Lpc(const std::vector<double> &r, std::vector<double> *a) {
  const std::size_t p = r.size() - 1;
  a->assign(p + 1, 0.0);
  (*a)[0] = 1.0;
  double err = r[0];
  if (!(err > 0.0)) return false;
  std::vector<double> prev(p + 1);
  for (std::size_t i = 1; i <= p; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += (*a)[j] * r[i - j];
    const double k = -acc / err;
    prev = *a;
    for (std::size_t j = 1; j < i; ++j) (*a)[j] = prev[j] + k * prev[i - j];
    (*a)[i] = k;
    err *= 1.0 - k * k;
    if (!(err > 0.0)) return false;
  }
  return true;
}

// a^T Toeplitz(r) a.
double QuadraticForm(const std::vector<double> &a, const std::vector<double> &r) {
  double s = 0.0;
  const std::size_t p = a.size();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      s += a[i] * r[i > j ? i - j : j - i] * a[j];
  return s;
}

double MeanOfLowest(std::vector<double> v, double fraction) {
  std::sort(v.begin(), v.end());
  std::size_t keep = static_cast<std::size_t>(
      std::lround(static_cast<double>(v.size()) * fraction));
  keep = std::clamp<std::size_t>(keep, 1, v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < keep; ++i) s += v[i];
  return s / static_cast<double>(keep);
}

constexpr std::size_t kCritBands = 25;
constexpr std::array<double, kCritBands> kCenterHz = {
    50.0,     120.0,    190.0,    260.0,    330.0,    400.0,    470.0,
    540.0,    617.372,  703.378,  798.717,  904.128,  1020.38,  1148.30,
    1288.72,  1442.54,  1610.70,  1794.16,  1993.93,  2211.08,  2446.71,
    2701.97,  2978.04,  3276.17,  3597.63};
constexpr std::array<double, kCritBands> kBandwidthHz = {
    70.0,     70.0,     70.0,     70.0,     70.0,     70.0,     70.0,
    77.3724,  86.0056,  95.3398,  105.411,  116.256,  127.914,  140.423,
    153.823,  168.154,  183.457,  199.776,  217.153,  235.631,  255.255,
    276.072,  298.126,  321.465,  346.136};

std::size_t NextPow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Critical-band energies in dB of one windowed frame.
std::array<double, kCritBands> BandEnergies(
    const std::vector<double> &frame, std::size_t n_fft,
    const std::vector<std::vector<double>> &filters) {
  std::vector<double> padded(n_fft, 0.0);
  std::copy(frame.begin(), frame.end(), padded.begin());
  std::vector<signal::Complex> spec = signal::Rfft(padded);
  const std::size_t half = n_fft / 2;
  std::array<double, kCritBands> e{};
  for (std::size_t b = 0; b < kCritBands; ++b) {
    double s = 0.0;
    for (std::size_t j = 0; j < half; ++j) s += std::norm(spec[j]) * filters[b][j];
    e[b] = 10.0 * std::log10(std::max(s, 1e-10));
  }
  return e;
}

// Energy of the nearest spectral peak for each band, searching along the
// sign of the local slope.
std::array<double, kCritBands - 1> LocalPeaks(
    const std::array<double, kCritBands> &e,
    const std::array<double, kCritBands - 1> &slope) {
  std::array<double, kCritBands - 1> peak{};
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(kCritBands) - 1;
  for (std::ptrdiff_t i = 0; i < last; ++i) {
    std::ptrdiff_t n = i;
    if (slope[static_cast<std::size_t>(i)] > 0.0) {
      while (n < last && slope[static_cast<std::size_t>(n)] > 0.0) ++n;
      peak[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(n - 1)];
    } else {
      while (n >= 0 && slope[static_cast<std::size_t>(n)] <= 0.0) --n;
      peak[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(n + 1)];
    }
  }
  return peak;
}

}  // namespace

double SiSdr(const signal::Waveform &reference,
             const signal::Waveform &estimate) {
  CheckPair(reference, estimate);
  const auto &x = reference.samples;
  const auto &e = estimate.samples;
  double xx = 0.0, ex = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x[i] * x[i];
    ex += e[i] * x[i];
  }
  if (!(xx > 0.0))
    throw Error(ErrorCode::kUndefinedReference, "SI-SDR of a zero reference");
  const double alpha = ex / xx;
  double target = 0.0, noise = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = alpha * x[i];
    target += t * t;
    noise += (t - e[i]) * (t - e[i]);
  }
  if (noise == 0.0) return kSiSdrCap;
  if (target == 0.0) return -kSiSdrCap;
  return std::clamp(10.0 * std::log10(target / noise), -kSiSdrCap, kSiSdrCap);
}

double SegmentalSnr(const signal::Waveform &reference,
                    const signal::Waveform &estimate, std::size_t frame_len,
                    std::size_t hop) {
  CheckPair(reference, estimate);
  TTA_REQUIRE(frame_len >= 1 && hop >= 1, ErrorCode::kInvalidArgument,
              "bad frame grid");
  constexpr double kMin = -10.0, kMax = 35.0;
  const std::vector<double> win = RefHann(frame_len);
  const std::size_t frames = FrameCount(reference.size(), frame_len, hop);
  std::vector<double> sig(frames), err(frames);
  double peak = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    auto x = WindowedFrame(reference.samples, t * hop, win);
    auto e = WindowedFrame(estimate.samples, t * hop, win);
    for (std::size_t i = 0; i < frame_len; ++i) {
      sig[t] += x[i] * x[i];
      err[t] += (x[i] - e[i]) * (x[i] - e[i]);
    }
    peak = std::max(peak, sig[t]);
  }
  double sum = 0.0;
  std::size_t active = 0;
  for (std::size_t t = 0; t < frames; ++t) {
    if (!(peak > 0.0) || sig[t] < 1e-8 * peak) continue;
    const double snr =
        err[t] == 0.0 ? kMax : 10.0 * std::log10(sig[t] / err[t]);
    sum += std::clamp(snr, kMin, kMax);
    ++active;
  }
  if (active == 0)
    throw Error(ErrorCode::kNoSpeechFrames,
                "segmental SNR: reference has no active frames");
  return sum / static_cast<double>(active);
}

double Llr(const signal::Waveform &reference, const signal::Waveform &estimate,
           std::size_t frame_len, std::size_t hop, std::size_t *skipped) {
  CheckPair(reference, estimate);
  const std::size_t order = reference.sample_rate < 10000 ? 10 : 16;
  const std::vector<double> win = RefHann(frame_len);
  const std::size_t frames = FrameCount(reference.size(), frame_len, hop);
  std::vector<double> dist;
  std::size_t bad = 0;
  std::vector<double> a_ref, a_est;
  for (std::size_t t = 0; t < frames; ++t) {
    auto r_ref = Autocorrelation(WindowedFrame(reference.samples, t * hop, win),
                                 order);
    auto r_est = Autocorrelation(WindowedFrame(estimate.samples, t * hop, win),
                                 order);
    if (!Lpc(r_ref, &a_ref) || !Lpc(r_est, &a_est)) {
      ++bad;
      continue;
    }
    const double num = QuadraticForm(a_est, r_ref);
    const double den = QuadraticForm(a_ref, r_ref);
    if (!(num > 0.0) || !(den > 0.0)) {
      ++bad;
      continue;
    }
    dist.push_back(std::clamp(std::log(num / den), 0.0, 2.0));
  }
  if (skipped) *skipped = bad;
  if (dist.empty())
    throw Error(ErrorCode::kNoSpeechFrames,
                "LLR: no frame with a usable LPC fit");
  return MeanOfLowest(std::move(dist), 0.95);
}

double Wss(const signal::Waveform &reference, const signal::Waveform &estimate,
           std::size_t frame_len, std::size_t hop) {
  CheckPair(reference, estimate);
  constexpr double kMaxWeight = 20.0, kLocWeight = 1.0;
  const double max_freq = reference.sample_rate / 2.0;
  const std::size_t n_fft = NextPow2(2 * frame_len);
  const std::size_t half = n_fft / 2;
  const double bw_min = kBandwidthHz[0];
  const double min_factor = std::exp(-30.0 / (2.0 * 2.303));
  std::vector<std::vector<double>> filters(kCritBands,
                                           std::vector<double>(half));
  for (std::size_t b = 0; b < kCritBands; ++b) {
    const double f0 = kCenterHz[b] / max_freq * static_cast<double>(half);
    const double bw = kBandwidthHz[b] / max_freq * static_cast<double>(half);
    const double norm = std::log(bw_min) - std::log(kBandwidthHz[b]);
    for (std::size_t j = 0; j < half; ++j) {
      const double u = (static_cast<double>(j) - std::floor(f0)) / bw;
      const double v = std::exp(-11.0 * u * u + norm);
      filters[b][j] = v > min_factor ? v : 0.0;
    }
  }
  const std::vector<double> win = RefHann(frame_len);
  const std::size_t frames = FrameCount(reference.size(), frame_len, hop);
  std::vector<double> dist;
  dist.reserve(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    auto ec = BandEnergies(WindowedFrame(reference.samples, t * hop, win),
                           n_fft, filters);
    auto ep = BandEnergies(WindowedFrame(estimate.samples, t * hop, win),
                           n_fft, filters);
    std::array<double, kCritBands - 1> sc{}, sp{};
    for (std::size_t b = 0; b + 1 < kCritBands; ++b) {
      sc[b] = ec[b + 1] - ec[b];
      sp[b] = ep[b + 1] - ep[b];
    }
    auto pc = LocalPeaks(ec, sc);
    auto pp = LocalPeaks(ep, sp);
    const double maxc = *std::max_element(ec.begin(), ec.end());
    const double maxp = *std::max_element(ep.begin(), ep.end());
    double num = 0.0, den = 0.0;
    for (std::size_t b = 0; b + 1 < kCritBands; ++b) {
      const double wc = kMaxWeight / (kMaxWeight + maxc - ec[b]) *
                        kLocWeight / (kLocWeight + pc[b] - ec[b]);
      const double wp = kMaxWeight / (kMaxWeight + maxp - ep[b]) *
                        kLocWeight / (kLocWeight + pp[b] - ep[b]);
      const double w = 0.5 * (wc + wp);
      num += w * (sc[b] - sp[b]) * (sc[b] - sp[b]);
      den += w;
    }
    dist.push_back(den > 0.0 ? num / den : 0.0);
  }
  return MeanOfLowest(std::move(dist), 0.95);
}

Composite CompositeMeasures(double pesq, double llr, double wss,
                            double segsnr) {
  TTA_REQUIRE(std::isfinite(pesq) && std::isfinite(llr) && std::isfinite(wss) &&
                  std::isfinite(segsnr),
              ErrorCode::kInvalidArgument, "composite inputs must be finite");
  auto clamp = [](double v) { return std::clamp(v, 1.0, 5.0); };
  Composite c;
  c.csig = clamp(3.093 - 1.029 * llr + 0.603 * pesq - 0.009 * wss);
  c.cbak = clamp(1.634 + 0.478 * pesq - 0.007 * wss + 0.063 * segsnr);
  c.covl = clamp(1.594 + 0.805 * pesq - 0.512 * llr - 0.007 * wss);
  return c;
}

}  // namespace tta::metrics
