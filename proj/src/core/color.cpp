// Copyright 2026 The Chronolapse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chronolapse/color.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cmath>

namespace chronolapse {
namespace {

constexpr int kLutSize = 4096;

// Encode table over [0, 1] with linear interpolation; only used inside the
// gain search. Final pixels go through QuantizeTable, which is exact.
struct EncodeLut {
  std::array<float, kLutSize + 1> table{};
  EncodeLut() {
    for (int i = 0; i <= kLutSize; ++i) {
      table[i] = static_cast<float>(SrgbEncode(static_cast<double>(i) / kLutSize));
    }
  }
  double operator()(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    double f = v * kLutSize;
    int i = static_cast<int>(f);
    double t = f - i;
    return table[i] + (table[i + 1] - table[i]) * t;
  }
};

const EncodeLut& Lut() {
  static const EncodeLut lut;
  return lut;
}

// Linear-light thresholds at which the 8-bit code of the exact transfer
// steps up: code(x) = number of thresholds <= x. Found by bisection over
// the double bit patterns, so it agrees with Quantize8(SrgbEncode(x)).
struct QuantizeTable {
  std::array<double, 255> lower{};
  QuantizeTable() {
    for (int k = 1; k <= 255; ++k) {
      std::uint64_t lo = 0;  // bits of 0.0: code 0 < k
      std::uint64_t hi = std::bit_cast<std::uint64_t>(1.0);  // code 255 >= k
      while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (Quantize8(SrgbEncode(std::bit_cast<double>(mid))) >= k) hi = mid; else lo = mid;
      }
      lower[k - 1] = std::bit_cast<double>(hi);
    }
  }
  std::uint8_t operator()(double v) const {
    return static_cast<std::uint8_t>(std::upper_bound(lower.begin(), lower.end(), v) -
                                     lower.begin());
  }
};

const QuantizeTable& Quantizer() {
  static const QuantizeTable table;
  return table;
}

struct DecodeTable {
  std::array<double, 256> table{};
  DecodeTable() {
    for (int i = 0; i < 256; ++i) table[i] = SrgbDecode(i / 255.0);
  }
};

}  // namespace

double SrgbEncode(double linear) {
  double v = std::clamp(linear, 0.0, 1.0);
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double SrgbDecode(double encoded) {
  double v = std::clamp(encoded, 0.0, 1.0);
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

std::uint8_t Quantize8(double encoded) {
  double v = std::floor(std::clamp(encoded, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

double DecodeByte(std::uint8_t code) {
  static const DecodeTable decode;
  return decode.table[code];
}

double MeanLuminance(std::span<const std::uint8_t> rgb) {
  const std::size_t n = rgb.size() / 3;
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += kLumaR * rgb[3 * i] + kLumaG * rgb[3 * i + 1] + kLumaB * rgb[3 * i + 2];
  }
  return sum / (255.0 * static_cast<double>(n));
}

double EncodedMeanAtGain(std::span<const float> linear_rgb, double gain) {
  const EncodeLut& lut = Lut();
  const std::size_t n = linear_rgb.size() / 3;
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += kLumaR * lut(linear_rgb[3 * i] * gain) +
           kLumaG * lut(linear_rgb[3 * i + 1] * gain) +
           kLumaB * lut(linear_rgb[3 * i + 2] * gain);
  }
  return sum / static_cast<double>(n);
}

double SolveGainForMean(std::span<const float> linear_rgb, double target,
                        double min_gain, double max_gain) {
  // Illinois false position on f(u) = mean(exp(u)) - target, u = log gain.
  double lo = std::log(min_gain);
  double hi = std::log(max_gain);
  double f_lo = EncodedMeanAtGain(linear_rgb, min_gain) - target;
  if (f_lo >= 0.0) return min_gain;
  double f_hi = EncodedMeanAtGain(linear_rgb, max_gain) - target;
  if (f_hi <= 0.0) return max_gain;
  int side = 0;
  double u = lo;
  for (int it = 0; it < 60; ++it) {
    u = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    const double f = EncodedMeanAtGain(linear_rgb, std::exp(u)) - target;
    if (std::abs(f) < 1e-7 || hi - lo < 1e-9) break;
    if (f < 0.0) {
      lo = u;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = u;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
  }
  return std::exp(u);
}

void EncodeWithGain(std::span<const float> linear_rgb, double gain,
                    std::span<std::uint8_t> out) {
  const QuantizeTable& quantize = Quantizer();
  for (std::size_t i = 0; i < linear_rgb.size(); ++i) {
    out[i] = quantize(linear_rgb[i] * gain);
  }
}

}  // namespace chronolapse
