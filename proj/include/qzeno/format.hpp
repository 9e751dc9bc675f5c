// Copyright 2026 The qzeno Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <charconv>
#include <complex>
#include <string>

namespace qzeno {

// 15 significant digits, '.' decimal separator regardless of locale.
// Negative zero is normalized away; "-0" helps nobody in a CSV.
inline std::string format_number(double value) {
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buffer;
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                    std::chars_format::general, 15);
  return std::string(buffer.data(), result.ptr);
}

inline std::string format_complex(const std::complex<double>& z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  return format_number(z.real()) + (im < 0.0 ? " - " : " + ") +
         format_number(im < 0.0 ? -im : im) + "i";
}

}  // namespace qzeno
