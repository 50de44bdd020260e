// Copyright 2026 The ioncycle Authors
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

#include <filesystem>
#include <string>
#include <vector>

#include "app/config.hpp"
#include "ioncycle/distribution.hpp"
#include "ioncycle/tomography.hpp"
#include "ioncycle/trace.hpp"

namespace ioncycle::app {

/// Writes via a temporary file in the same directory and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Shortest round-tripping decimal form.
std::string number(double v);

/// First line of every CSV: "# ioncycle <version> name=<name> seed=<seed> <extra>".
std::string csv_banner(const std::string& name, std::uint64_t seed, const std::string& extra = "");

std::string trace_csv(const SimulationTrace& trace, const std::string& banner);
std::string boundaries_csv(const SimulationTrace& trace, const std::string& banner);
std::string distribution_csv(const PhononDistribution& p, const std::string& banner);
std::string scan_csv(const RabiScan& scan, const std::string& banner);

/// Minimal CSV table: '#' lines skipped, first remaining line is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
RabiScan read_scan(const std::filesystem::path& path);
PhononDistribution read_distribution(const std::filesystem::path& path);

}  // namespace ioncycle::app
