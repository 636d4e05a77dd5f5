// Copyright 2026 The tmsq Authors
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

// Measurement CSV ingestion.
//
// One header row, comma separated, '.' decimals, no quoting. Columns:
//
//   label, probe_db, conjugate_db, squeezed_db, antisqueezed_db, v_p, v_c
//   [, electronic_floor_db] [, shot_noise_db]
//
// Noise columns are dB on a common reference. shot_noise_db gives the shot
// noise level on that reference (default 0, i.e. the noises are already
// relative to shot noise). electronic_floor_db is the dark-detector level on
// the same reference. The floor is removed in linear units from both the
// noise and the shot-noise reference, so for linear values x, s, f:
//
//   corrected = (x - f) / (s - f)
//
// which keeps vacuum at exactly 1 after subtraction.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmsq/estimator.hpp"

namespace tmsq {

class InputError : public std::runtime_error {
 public:
  InputError(std::size_t row, const std::string& what);
  /// 1-based data row (0 for header or file-level problems).
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Reads and validates a measurement table. Returned points are expressed
/// relative to shot noise; the floor (if any) is kept for linear_noises().
/// Throws InputError for a missing column, a non-numeric cell, or a floor at
/// or above any noise in its row.
std::vector<MeasurementPoint> read_measurements(std::istream& in);
std::vector<MeasurementPoint> load_measurements(const std::filesystem::path& path);

}  // namespace tmsq
