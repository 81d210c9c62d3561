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

#ifndef CHRONOLAPSE_COLOR_HPP_
#define CHRONOLAPSE_COLOR_HPP_

#include <cstdint>
#include <span>

namespace chronolapse {

// Rec.709 luma weights, applied to 8-bit encoded values.
inline constexpr double kLumaR = 0.2126;
inline constexpr double kLumaG = 0.7152;
inline constexpr double kLumaB = 0.0722;

// Standard sRGB transfer (piecewise, linear toe). Inputs clamp to [0, 1].
double SrgbEncode(double linear);
double SrgbDecode(double encoded);

// Round-half-up quantization of an encoded value in [0, 1] to 8 bits.
std::uint8_t Quantize8(double encoded);

// Linear-light value of each 8-bit code.
double DecodeByte(std::uint8_t code);

// Encoded luminance in [0, 1] of one 8-bit RGB pixel.
inline double PixelLuminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return (kLumaR * r + kLumaG * g + kLumaB * b) / 255.0;
}

// Mean encoded luminance of interleaved 8-bit RGB pixels.
double MeanLuminance(std::span<const std::uint8_t> rgb);

// Mean encoded (pre-quantization) luminance of linear RGB scaled by gain.
double EncodedMeanAtGain(std::span<const float> linear_rgb, double gain);

// Gain g in [min_gain, max_gain] whose encoded mean luminance of
// linear_rgb * g is closest to target. False position in log-gain; the encoded
// mean is monotone in g. Returns the clamped bound when the target is out
// of reach.
double SolveGainForMean(std::span<const float> linear_rgb, double target,
                        double min_gain, double max_gain);

// Applies gain in linear light and writes rounded 8-bit sRGB.
void EncodeWithGain(std::span<const float> linear_rgb, double gain,
                    std::span<std::uint8_t> out);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_COLOR_HPP_
