// Copyright 2026 The povm-forge Authors
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
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "povmforge/circuits.hpp"
#include "povmforge/matcore.hpp"
#include "povmforge/povm.hpp"

namespace povmforge::io {

using Json = nlohmann::ordered_json;

// Matrix text format: first line "rows cols", then one "re im" line per
// entry in row-major order, 17 significant digits.
void write_matrix_text(std::ostream& out, const ComplexMatrix& m);
void write_matrix_text(const std::filesystem::path& path,
                       const ComplexMatrix& m);
ComplexMatrix read_matrix_text(std::istream& in);
ComplexMatrix read_matrix_text(const std::filesystem::path& path);

/// Writes {dim, outcomes: [{label, matrix_file}]} to <basename>.json and one
/// matrix text file per outcome next to it.
void export_povm(const povm::Povm& p, const std::filesystem::path& directory,
                 const std::string& basename);
povm::Povm import_povm(const std::filesystem::path& json_path);

Json circuit_to_json(const circuits::Circuit& circuit);
circuits::Circuit circuit_from_json(const Json& j);

Json check_report_to_json(const CheckReport& report);

/// CSV with columns outcome_label, probability, count. Labels are quoted.
void write_outcome_csv(std::ostream& out,
                       const circuits::MeasurementResult& result);
void write_outcome_csv(const std::filesystem::path& path,
                       const circuits::MeasurementResult& result);

/// CSV with columns t, s, probability_density.
void write_density_csv(std::ostream& out, const std::vector<double>& t,
                       const std::vector<double>& s,
                       const std::vector<std::vector<double>>& density);
void write_density_csv(const std::filesystem::path& path,
                       const std::vector<double>& t,
                       const std::vector<double>& s,
                       const std::vector<std::vector<double>>& density);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace povmforge::io
