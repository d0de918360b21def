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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "povmforge/io.hpp"
#include "test_util.hpp"

using namespace povmforge;
namespace io = povmforge::io;
namespace pv = povmforge::povm;
namespace qc = povmforge::circuits;

TEST_CASE("matrix text round trip is exact") {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = testutil::random_ginibre(5, 3, rng);
  std::stringstream buffer;
  io::write_matrix_text(buffer, m);

  // header carries the shape
  std::string header;
  std::getline(std::stringstream(buffer.str()), header);
  CHECK(header == "5 3");

  const ComplexMatrix back = io::read_matrix_text(buffer);
  CHECK((back.array() == m.array()).all());
}

TEST_CASE("matrix text rejects malformed input") {
  std::stringstream bad("2 2\n1.0 0.0\n");
  CHECK_THROWS_AS(io::read_matrix_text(bad), ParameterError);
}

TEST_CASE("povm export and import round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "povmforge_io_test";
  std::filesystem::remove_all(dir);
  std::mt19937_64 rng(5);
  const pv::Povm family = pv::hw_povm(2, pv::random_psd(2, 0.5, rng));
  io::export_povm(family, dir, "family");

  const pv::Povm back = io::import_povm(dir / "family.json");
  REQUIRE(back.size() == family.size());
  CHECK(back.dim() == family.dim());
  for (std::size_t j = 0; j < family.size(); ++j) {
    CHECK(back.label(j) == family.label(j));
    CHECK((back.op(j) - family.op(j)).cwiseAbs().maxCoeff() == 0.0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("circuit json round trip preserves the unitary") {
  const qc::Circuit circuit = qc::cyclic_gate_circuit(2);
  const io::Json doc = io::circuit_to_json(circuit);
  CHECK(doc.at("gates").size() == circuit.gates.size());
  CHECK(doc.at("gates")[0].at("kind") == "Permutation");

  const qc::Circuit back = io::circuit_from_json(doc);
  CHECK((qc::dense_unitary(back) - qc::dense_unitary(circuit))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(back.measured == circuit.measured);
}

TEST_CASE("dense blocks survive the json round trip") {
  qc::Circuit circuit;
  circuit.dims = {3, 2};
  std::mt19937_64 rng(7);
  circuit.gates = {
      qc::Gate::dense_block({0, 1}, testutil::random_unitary(6, rng))};
  circuit.measured = {0};
  const qc::Circuit back = io::circuit_from_json(io::circuit_to_json(circuit));
  CHECK((back.gates[0].block.array() == circuit.gates[0].block.array()).all());
}

TEST_CASE("outcome csv quotes labels with commas") {
  qc::Circuit circuit = qc::hw_circuit(2);
  qc::QuditRegister in({2, 2, 2});
  const auto result = qc::run_measurement(circuit, in, 3, 10);
  std::stringstream out;
  io::write_outcome_csv(out, result);
  const std::string text = out.str();
  CHECK(text.rfind("outcome_label,probability,count\n", 0) == 0);
  CHECK(text.find("\"0,0\"") != std::string::npos);
}

TEST_CASE("check report serialization") {
  CheckReport report;
  report.check = "demo";
  report.max_error = 0.5;
  report.tolerance = 1.0;
  report.pass = true;
  const io::Json j = io::check_report_to_json(report);
  CHECK(j.at("check") == "demo");
  CHECK(j.at("pass") == true);
  CHECK(j.at("max_error") == 0.5);
}
