// Copyright 2026 The nnlut Authors
// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <cstdint>

namespace nnlut {

inline constexpr double kBinary16Max = 65504.0;

// Rounds to the nearest binary16 value (ties to even) and returns it as a
// double. Subnormals are honored; results beyond kBinary16Max become +-inf.
double round_to_binary16(double v);

// IEEE bit pattern of round_to_binary16(v).
uint16_t to_binary16_bits(double v);
double from_binary16_bits(uint16_t bits);

}  // namespace nnlut
