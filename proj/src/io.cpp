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

#include "povmforge/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace povmforge::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open for reading: " + path.string());
  return in;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_matrix_text(std::ostream& out, const ComplexMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << std::real(m(i, j)) << ' ' << std::imag(m(i, j)) << '\n';
    }
  }
  if (!out) throw NumericError("matrix write failed");
}

void write_matrix_text(const std::filesystem::path& path,
                       const ComplexMatrix& m) {
  auto out = open_out(path);
  write_matrix_text(out, m);
}

ComplexMatrix read_matrix_text(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw ParameterError("matrix text: bad header");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw ParameterError("matrix text: short file");
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ComplexMatrix read_matrix_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix_text(in);
}

void export_povm(const povm::Povm& p, const std::filesystem::path& directory,
                 const std::string& basename) {
  std::filesystem::create_directories(directory);
  Json doc;
  doc["dim"] = p.dim();
  doc["outcomes"] = Json::array();
  for (std::size_t j = 0; j < p.size(); ++j) {
    const std::string file = basename + "_" + std::to_string(j) + ".txt";
    write_matrix_text(directory / file, p.op(j));
    doc["outcomes"].push_back(
        Json{{"label", p.label(j)}, {"matrix_file", file}});
  }
  write_json(directory / (basename + ".json"), doc);
}

povm::Povm import_povm(const std::filesystem::path& json_path) {
  auto in = open_in(json_path);
  Json doc = Json::parse(in);
  const auto dim = doc.at("dim").get<Eigen::Index>();
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
  for (const auto& outcome : doc.at("outcomes")) {
    labels.push_back(outcome.at("label").get<std::string>());
    ops.push_back(read_matrix_text(
        json_path.parent_path() /
        outcome.at("matrix_file").get<std::string>()));
  }
  return povm::Povm(dim, std::move(ops), std::move(labels));
}

Json circuit_to_json(const circuits::Circuit& circuit) {
  Json doc;
  doc["dims"] = circuit.dims;
  doc["gates"] = Json::array();
  for (const auto& gate : circuit.gates) {
    Json g;
    g["kind"] = circuits::to_string(gate.kind);
    g["targets"] = gate.targets;
    g["controls"] = gate.controls;
    Json params = Json::object();
    switch (gate.kind) {
      case circuits::GateKind::ShiftPower:
      case circuits::GateKind::PhasePower:
        params["power"] = gate.power;
        break;
      case circuits::GateKind::RPhasePower:
        params["power"] = gate.power;
        params["modulus"] = gate.modulus;
        break;
      case circuits::GateKind::Permutation:
        params["permutation"] = gate.permutation;
        break;
      case circuits::GateKind::DenseBlock: {
        std::ostringstream text;
        write_matrix_text(text, gate.block);
        params["matrix"] = text.str();
        break;
      }
      default:
        break;
    }
    g["params"] = params;
    doc["gates"].push_back(std::move(g));
  }
  doc["measured"] = circuit.measured;
  return doc;
}

circuits::Circuit circuit_from_json(const Json& j) {
  circuits::Circuit circuit;
  circuit.dims = j.at("dims").get<std::vector<Eigen::Index>>();
  for (const auto& g : j.at("gates")) {
    circuits::Gate gate;
    gate.kind =
        circuits::gate_kind_from_string(g.at("kind").get<std::string>());
    gate.targets = g.at("targets").get<std::vector<int>>();
    gate.controls = g.at("controls").get<std::vector<int>>();
    const Json& params = g.at("params");
    if (params.contains("power")) gate.power = params["power"].get<long>();
    if (params.contains("modulus")) {
      gate.modulus = params["modulus"].get<long>();
    }
    if (params.contains("permutation")) {
      gate.permutation = params["permutation"].get<std::vector<int>>();
    }
    if (params.contains("matrix")) {
      std::istringstream text(params["matrix"].get<std::string>());
      gate.block = read_matrix_text(text);
    }
    circuit.gates.push_back(std::move(gate));
  }
  circuit.measured = j.at("measured").get<std::vector<int>>();
  circuit.validate();
  return circuit;
}

Json check_report_to_json(const CheckReport& report) {
  return Json{{"check", report.check},
              {"max_error", report.max_error},
              {"tolerance", report.tolerance},
              {"pass", report.pass}};
}

void write_outcome_csv(std::ostream& out,
                       const circuits::MeasurementResult& result) {
  out << "outcome_label,probability,count\n";
  out << std::setprecision(17);
  for (std::size_t o = 0; o < result.probabilities.size(); ++o) {
    out << csv_quote(result.labels[o]) << ',' << result.probabilities[o]
        << ',' << result.counts[o] << '\n';
  }
  if (!out) throw NumericError("csv write failed");
}

void write_outcome_csv(const std::filesystem::path& path,
                       const circuits::MeasurementResult& result) {
  auto out = open_out(path);
  write_outcome_csv(out, result);
}

void write_density_csv(std::ostream& out, const std::vector<double>& t,
                       const std::vector<double>& s,
                       const std::vector<std::vector<double>>& density) {
  if (density.size() != t.size()) {
    throw ParameterError("density csv: row count mismatch");
  }
  out << "t,s,probability_density\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (density[i].size() != s.size()) {
      throw ParameterError("density csv: column count mismatch");
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
      out << t[i] << ',' << s[j] << ',' << density[i][j] << '\n';
    }
  }
  if (!out) throw NumericError("csv write failed");
}

void write_density_csv(const std::filesystem::path& path,
                       const std::vector<double>& t,
                       const std::vector<double>& s,
                       const std::vector<std::vector<double>>& density) {
  auto out = open_out(path);
  write_density_csv(out, t, s, density);
}

void write_json(const std::filesystem::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw NumericError("json write failed");
}

}  // namespace povmforge::io
