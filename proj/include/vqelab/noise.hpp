// Copyright 2026 The vqe-lab Authors
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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqelab/state.hpp"

namespace vqelab {

struct QubitCalibration {
  double t1_us = 0.0;
  double t2_us = 0.0;
  double p01 = 0.0;  // P(read 1 | prepared 0)
  double p10 = 0.0;  // P(read 0 | prepared 1)
};

struct GateCalibration {
  int arity = 1;
  double p_dep = 0.0;        // depolarizing probability
  double duration_ns = 0.0;  // thermal-relaxation exposure per application
};

/// Per-qubit decoherence/readout data and per-gate-kind error data for one
/// device snapshot. Gate kinds used by the artifact: "ry", "rz", "x", "cnot".
struct DeviceCalibration {
  std::string backend;
  std::string date;
  std::vector<QubitCalibration> qubits;
  std::map<std::string, GateCalibration> gates;

  void validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      const auto& q = qubits[k];
      const std::string where = "qubits[" + std::to_string(k) + "]";
      if (!(q.t1_us > 0.0)) throw std::runtime_error(where + ".t1_us must be positive");
      if (!(q.t2_us > 0.0)) throw std::runtime_error(where + ".t2_us must be positive");
      if (q.t2_us > 2.0 * q.t1_us + 1e-12)
        throw std::runtime_error(where + ".t2_us exceeds 2*t1_us");
      if (!in01(q.p01)) throw std::runtime_error(where + ".p01 outside [0,1]");
      if (!in01(q.p10)) throw std::runtime_error(where + ".p10 outside [0,1]");
    }
    for (const auto& [kind, g] : gates) {
      const std::string where = "gates[" + kind + "]";
      if (g.arity != 1 && g.arity != 2) throw std::runtime_error(where + ".qubits must be 1 or 2");
      if (!in01(g.p_dep)) throw std::runtime_error(where + ".p_dep outside [0,1]");
      if (g.duration_ns < 0.0) throw std::runtime_error(where + ".duration_ns must be >= 0");
    }
  }

  static DeviceCalibration from_json(const nlohmann::json& j) {
    DeviceCalibration cal;
    cal.backend = j.value("backend", "");
    cal.date = j.value("date", "");
    if (!j.contains("qubits") || !j["qubits"].is_array())
      throw std::runtime_error("calibration: missing qubits[] section");
    for (const auto& jq : j["qubits"]) {
      QubitCalibration q;
      for (const char* field : {"t1_us", "t2_us", "p01", "p10"})
        if (!jq.contains(field))
          throw std::runtime_error(std::string("calibration: qubits[] entry missing ") + field);
      q.t1_us = jq["t1_us"].get<double>();
      q.t2_us = jq["t2_us"].get<double>();
      q.p01 = jq["p01"].get<double>();
      q.p10 = jq["p10"].get<double>();
      cal.qubits.push_back(q);
    }
    if (!j.contains("gates") || !j["gates"].is_array())
      throw std::runtime_error("calibration: missing gates[] section");
    for (const auto& jg : j["gates"]) {
      if (!jg.contains("kind")) throw std::runtime_error("calibration: gates[] entry missing kind");
      const std::string kind = jg["kind"].get<std::string>();
      GateCalibration g;
      if (!jg.contains("qubits"))
        throw std::runtime_error("calibration: gates[" + kind + "] missing qubits arity");
      if (!jg.contains("p_dep"))
        throw std::runtime_error("calibration: gates[" + kind + "] missing p_dep");
      if (!jg.contains("duration_ns"))
        throw std::runtime_error("calibration: gates[" + kind + "] missing duration_ns");
      g.arity = jg["qubits"].get<int>();
      g.p_dep = jg["p_dep"].get<double>();
      g.duration_ns = jg["duration_ns"].get<double>();
      cal.gates[kind] = g;
    }
    cal.validate();
    return cal;
  }

  static DeviceCalibration load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open calibration file: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("calibration parse error in " + path + ": " + e.what());
    }
    return from_json(j);
  }
};

enum class ErrorClass { None, GatesOnly, ReadoutOnly, All };

inline ErrorClass error_class_from_string(const std::string& s) {
  if (s == "none") return ErrorClass::None;
  if (s == "gates") return ErrorClass::GatesOnly;
  if (s == "readout") return ErrorClass::ReadoutOnly;
  if (s == "all") return ErrorClass::All;
  throw std::invalid_argument("noise class must be none|gates|readout|all");
}

inline const char* to_string(ErrorClass e) {
  switch (e) {
    case ErrorClass::None: return "none";
    case ErrorClass::GatesOnly: return "gates";
    case ErrorClass::ReadoutOnly: return "readout";
    case ErrorClass::All: return "all";
  }
  return "none";
}

struct NoiseConfig {
  ErrorClass error_class = ErrorClass::None;
  std::optional<DeviceCalibration> calibration;

  bool gate_noise() const {
    return error_class == ErrorClass::GatesOnly || error_class == ErrorClass::All;
  }
  bool readout_noise() const {
    return error_class == ErrorClass::ReadoutOnly || error_class == ErrorClass::All;
  }

  void require_calibration(std::size_t num_qubits) const {
    if (error_class == ErrorClass::None) return;
    if (!calibration) throw std::invalid_argument("noise config requires calibration data");
    if (calibration->qubits.size() < num_qubits)
      throw std::invalid_argument("calibration covers fewer qubits than the register");
  }
};

/// Column-stochastic readout confusion matrix: entry(i, j) = P(read i | true j).
class ConfusionMatrix {
 public:
  static ConfusionMatrix identity(std::size_t num_qubits) {
    ConfusionMatrix c(num_qubits);
    for (std::size_t i = 0; i < c.dim(); ++i) c.m_[i * c.dim() + i] = 1.0;
    return c;
  }

  /// From per-column probability vectors (column j = distribution of readouts
  /// for prepared basis state j).
  static ConfusionMatrix from_columns(const std::vector<std::vector<double>>& columns) {
    std::size_t q = 0;
    while ((std::size_t{1} << q) < columns.size()) ++q;
    if ((std::size_t{1} << q) != columns.size())
      throw std::invalid_argument("column count must be a power of two");
    ConfusionMatrix c(q);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != columns.size())
        throw std::invalid_argument("confusion column has wrong length");
      for (std::size_t i = 0; i < columns.size(); ++i) c.m_[i * c.dim() + j] = columns[j][i];
    }
    return c;
  }

  std::size_t num_qubits() const { return q_; }
  std::size_t dim() const { return std::size_t{1} << q_; }
  double entry(std::size_t read, std::size_t truth) const { return m_[read * dim() + truth]; }
  double& entry(std::size_t read, std::size_t truth) { return m_[read * dim() + truth]; }

  /// p_read = C * p_true
  std::vector<double> apply(std::span<const double> p) const {
    if (p.size() != dim()) throw std::invalid_argument("confusion: probability length mismatch");
    std::vector<double> out(dim(), 0.0);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) out[i] += m_[i * dim() + j] * p[j];
    return out;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j)
        if (std::abs(m_[i * dim() + j] - (i == j ? 1.0 : 0.0)) > 1e-15) return false;
    return true;
  }

 private:
  explicit ConfusionMatrix(std::size_t q) : q_(q), m_(std::size_t{1} << (2 * q), 0.0) {}
  std::size_t q_;
  std::vector<double> m_;  // row-major
};

/// One stage of a gate's noise channel: a Kraus set on specific qubits.
struct ChannelStage {
  std::vector<std::size_t> qubits;
  std::vector<KrausOp> kraus;
};

namespace detail {

inline std::vector<KrausOp> depolarizing_1q(double p) {
  const double w0 = std::sqrt(1.0 - 3.0 * p / 4.0), w = std::sqrt(p / 4.0);
  return {
      KrausOp::one_qubit(w0, 0, 0, w0),
      KrausOp::one_qubit(0, w, w, 0),                        // X
      KrausOp::one_qubit(0, cxd{0, -w}, cxd{0, w}, 0),       // Y
      KrausOp::one_qubit(w, 0, 0, -w),                       // Z
  };
}

inline std::vector<KrausOp> depolarizing_2q(double p) {
  static const std::array<std::array<cxd, 4>, 4> paulis = {{
      {cxd{1, 0}, {0, 0}, {0, 0}, {1, 0}},    // I
      {cxd{0, 0}, {1, 0}, {1, 0}, {0, 0}},    // X
      {cxd{0, 0}, {0, -1}, {0, 1}, {0, 0}},   // Y
      {cxd{1, 0}, {0, 0}, {0, 0}, {-1, 0}},   // Z
  }};
  std::vector<KrausOp> ks;
  ks.reserve(16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double w = (a == 0 && b == 0) ? std::sqrt(1.0 - 15.0 * p / 16.0) : std::sqrt(p / 16.0);
      std::array<cxd, 16> m{};
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          m[static_cast<std::size_t>(r) * 4 + c] =
              w * paulis[a][static_cast<std::size_t>((r >> 1) * 2 + (c >> 1))] *
              paulis[b][static_cast<std::size_t>((r & 1) * 2 + (c & 1))];
      ks.push_back(KrausOp::two_qubit(m));
    }
  }
  return ks;
}

inline std::vector<KrausOp> amplitude_damping(double gamma) {
  return {KrausOp::one_qubit(1, 0, 0, std::sqrt(1.0 - gamma)),
          KrausOp::one_qubit(0, std::sqrt(gamma), 0, 0)};
}

inline std::vector<KrausOp> phase_damping(double lambda) {
  return {KrausOp::one_qubit(1, 0, 0, std::sqrt(1.0 - lambda)),
          KrausOp::one_qubit(0, 0, 0, std::sqrt(lambda))};
}

}  // namespace detail

inline const GateCalibration& gate_calibration_for(const DeviceCalibration& cal, const Gate& g) {
  const char* kind = nullptr;
  switch (g.kind) {
    case Gate::Kind::Ry: kind = "ry"; break;
    case Gate::Kind::Rz: kind = "rz"; break;
    case Gate::Kind::X: kind = "x"; break;
    case Gate::Kind::Cnot: kind = "cnot"; break;
  }
  auto it = cal.gates.find(kind);
  if (it == cal.gates.end())
    throw std::runtime_error(std::string("calibration has no entry for gate kind '") + kind + "'");
  return it->second;
}

/// Noise applied after one gate: depolarizing on the gate's qubits, then
/// per-qubit thermal relaxation for the gate duration (amplitude damping with
/// gamma = 1 - exp(-t/T1), then phase damping from the pure-dephasing time
/// 1/Tphi = 1/T2 - 1/(2 T1)).
inline std::vector<ChannelStage> gate_channel(const DeviceCalibration& cal, const Gate& g) {
  const GateCalibration& gc = gate_calibration_for(cal, g);
  std::vector<std::size_t> gate_qubits =
      g.kind == Gate::Kind::Cnot ? std::vector<std::size_t>{g.control, g.target}
                                 : std::vector<std::size_t>{g.target};
  if (static_cast<int>(gate_qubits.size()) != gc.arity)
    throw std::runtime_error("calibration arity does not match gate kind");

  std::vector<ChannelStage> stages;
  if (gc.p_dep > 0.0) {
    stages.push_back({gate_qubits, gate_qubits.size() == 1 ? detail::depolarizing_1q(gc.p_dep)
                                                           : detail::depolarizing_2q(gc.p_dep)});
  }
  for (std::size_t k : gate_qubits) {
    if (k >= cal.qubits.size())
      throw std::runtime_error("calibration covers fewer qubits than the gate touches");
    const auto& qc = cal.qubits[k];
    const double t_us = gc.duration_ns * 1e-3;
    const double gamma = 1.0 - std::exp(-t_us / qc.t1_us);
    const double inv_tphi = 1.0 / qc.t2_us - 1.0 / (2.0 * qc.t1_us);
    const double lambda = 1.0 - std::exp(-2.0 * t_us * inv_tphi);
    if (gamma > 0.0) stages.push_back({{k}, detail::amplitude_damping(gamma)});
    if (lambda > 0.0) stages.push_back({{k}, detail::phase_damping(lambda)});
  }
  return stages;
}

/// Tensor product of per-qubit confusion matrices [[1-p01, p10], [p01, 1-p10]].
inline ConfusionMatrix readout_confusion(const DeviceCalibration& cal, std::size_t num_qubits) {
  if (cal.qubits.size() < num_qubits)
    throw std::invalid_argument("calibration covers fewer qubits than requested");
  ConfusionMatrix c = ConfusionMatrix::identity(num_qubits);
  const std::size_t n = std::size_t{1} << num_qubits;
  for (std::size_t read = 0; read < n; ++read) {
    for (std::size_t truth = 0; truth < n; ++truth) {
      double v = 1.0;
      for (std::size_t k = 0; k < num_qubits; ++k) {
        const auto& qc = cal.qubits[k];
        const bool rb = (read >> k) & 1ULL, tb = (truth >> k) & 1ULL;
        v *= tb ? (rb ? 1.0 - qc.p10 : qc.p10) : (rb ? qc.p01 : 1.0 - qc.p01);
      }
      c.entry(read, truth) = v;
    }
  }
  return c;
}

}  // namespace vqelab
