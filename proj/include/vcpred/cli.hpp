// SPDX-License-Identifier: Apache-2.0
//
// vcpred - environment-aware vehicle-to-infrastructure channel prediction
// Copyright (C) 2026 vcpred contributors
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

namespace vcpred {

/// Command-line entry point. Subcommands: gen-data, train, eval, exp1..exp4,
/// report. Returns 0 on success, 1 with an `error:` line on runtime failure,
/// 2 with usage text on bad flags or subcommands.
int run_cli(int argc, const char* const* argv);

}  // namespace vcpred
