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

// The `nnlut` command line: train, fit-linear, convert, eval, compose,
// calibrate and cost.

#include <iosfwd>
#include <string>
#include <vector>

namespace nnlut::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitContract = 2,  // contract or equivalence failure, bad artifact
  kExitDivergence = 3,
};

// `args` includes the program name. NNLUT_SEED, when set, overrides --seed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nnlut::cli
