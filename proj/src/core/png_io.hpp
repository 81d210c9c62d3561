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

#ifndef CHRONOLAPSE_SRC_CORE_PNG_IO_HPP_
#define CHRONOLAPSE_SRC_CORE_PNG_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace chronolapse {

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

// 8-bit RGB PNG, no ancillary chunks, so output bytes are reproducible.
void WritePng(const std::string& path, int width, int height,
              const std::vector<std::uint8_t>& rgb);
std::vector<std::uint8_t> EncodePng(int width, int height,
                                    const std::vector<std::uint8_t>& rgb);
RgbImage ReadPng(const std::string& path);

}  // namespace chronolapse

#endif  // CHRONOLAPSE_SRC_CORE_PNG_IO_HPP_
