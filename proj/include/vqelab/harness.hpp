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

#include <atomic>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vqelab/ansatz.hpp"
#include "vqelab/estimator.hpp"
#include "vqelab/mitigation.hpp"
#include "vqelab/noise.hpp"
#include "vqelab/pauli.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/spectrum.hpp"
#include "vqelab/spsa.hpp"
#include "vqelab/stats.hpp"

namespace vqelab {

/// Physical H2 ground-state energy used as the accuracy reference, and the
/// chemical-accuracy half-width, both in Hartree.
inline constexpr double kReferenceGroundEnergy = -1.86712;
inline constexpr double kChemicalAccuracy = 0.0015;

struct RecalcPolicy {
  enum class Mode { None, Exact, Shots };
  Mode mode = Mode::None;
  std::uint64_t shots = 0;

  static RecalcPolicy none() { return {Mode::None, 0}; }
  static RecalcPolicy exact() { return {Mode::Exact, 0}; }
  static RecalcPolicy with_shots(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("recalculation shots must be >= 1");
    return {Mode::Shots, n};
  }
};

struct ExperimentConfig {
  PauliSum hamiltonian{2};
  AnsatzSpec ansatz{};
  ShotPolicy shots = ShotPolicy::sampled(1024);
  std::size_t maxiter = 1000;
  NoiseConfig noise{};
  bool mitigate = false;
  bool mitigate_final_only = false;
  std::uint64_t mitigation_shots = 0;  // 0: reuse the experiment shots
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  RecalcPolicy recalc = RecalcPolicy::none();
  bool record_trace = true;
  double spsa_a = 0.0;  // 0: calibrate
  double spsa_c = 0.1;

  SpsaConfig spsa_config() const {
    SpsaConfig cfg;
    cfg.maxiter = maxiter;
    cfg.a = spsa_a;
    cfg.c = spsa_c;
    return cfg;
  }

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    ansatz.validate();
    spsa_config().validate();
    if (ansatz.num_qubits != hamiltonian.num_qubits())
      throw std::invalid_argument("ansatz register size does not match Hamiltonian");
    noise.require_calibration(ansatz.num_qubits);
    if (mitigate && shots.mode == ShotPolicy::Mode::Exact && mitigation_shots == 0)
      throw std::invalid_argument("mitigation with an exact shot policy needs --mitigation-shots");
  }
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  std::vector<double> final_parameters;
  double final_energy = 0.0;
  std::vector<double> energy_trace;  // per-iteration midpoint (f+ + f-)/2
  std::vector<std::pair<std::string, std::vector<double>>> final_group_probabilities;
  std::optional<double> recalculated_energy;
  std::uint64_t objective_evaluations = 0;
};

inline TrialRecord run_trial(const ExperimentConfig& config, const EnergyEstimator& estimator,
                             std::size_t index) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = derive_seed(config.master_seed, index);
  try {
    Rng rng(rec.seed);
    const std::vector<double> theta0 = random_parameters(config.ansatz, rng);

    std::optional<MitigationModel> model;
    if (config.mitigate) {
      const std::uint64_t cal_shots = config.mitigation_shots > 0 ? config.mitigation_shots
                                       : config.shots.sampled_mode() ? config.shots.shots
                                                                     : 0;
      model = build_mitigation(config.noise, config.ansatz.num_qubits, cal_shots, rng);
    }
    const MitigationModel* during_opt =
        (model && !config.mitigate_final_only) ? &*model : nullptr;
    const MitigationModel* at_readout = model ? &*model : nullptr;

    std::uint64_t evaluations = 0;
    const Objective objective = [&](std::span<const double> theta) {
      ++evaluations;
      return estimator.estimate(theta, config.shots, rng, during_opt).energy;
    };

    OptimizationTrace trace = minimize(objective, theta0, config.spsa_config(), rng);

    // final readout with the trial's shot policy
    EstimationResult final_result =
        estimator.estimate(trace.final_theta, config.shots, rng, at_readout);
    ++evaluations;

    rec.final_parameters = trace.final_theta;
    rec.final_energy = final_result.energy;
    for (auto& [group, probs] : final_result.group_probabilities)
      rec.final_group_probabilities.emplace_back(group.basis_label(config.ansatz.num_qubits),
                                                 std::move(probs));
    if (config.record_trace) {
      rec.energy_trace.reserve(trace.iterations.size());
      for (const auto& it : trace.iterations)
        rec.energy_trace.push_back(0.5 * (it.f_plus + it.f_minus));
    }

    switch (config.recalc.mode) {
      case RecalcPolicy::Mode::None:
        break;
      case RecalcPolicy::Mode::Exact: {
        // statevector recalculation: noiseless rebuild of the optimized state
        QuantumState state = QuantumState::zero(config.ansatz.num_qubits, StateMode::Pure);
        for (const auto& g : build_circuit(config.ansatz, trace.final_theta)) state.apply_gate(g);
        rec.recalculated_energy = exact_energy(config.hamiltonian, state);
        break;
      }
      case RecalcPolicy::Mode::Shots: {
        rec.recalculated_energy =
            estimator.estimate(trace.final_theta, ShotPolicy::sampled(config.recalc.shots), rng,
                               at_readout)
                .energy;
        ++evaluations;
        break;
      }
    }
    rec.objective_evaluations = evaluations;
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

/// N independent trials with seeds derived from (master seed, index), run on
/// a bounded worker pool. Records come back in index order regardless of the
/// thread count.
inline std::vector<TrialRecord> run_sweep(const ExperimentConfig& config,
                                          std::size_t threads = 1) {
  config.validate();
  const EnergyEstimator estimator(config.hamiltonian, config.ansatz, config.noise);
  std::vector<TrialRecord> records(config.trials);
  threads = std::max<std::size_t>(1, std::min(threads, config.trials));
  if (threads == 1) {
    for (std::size_t i = 0; i < config.trials; ++i) records[i] = run_trial(config, estimator, i);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= config.trials) return;
        records[i] = run_trial(config, estimator, i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return records;
}

inline std::vector<double> collect_energies(const std::vector<TrialRecord>& records,
                                            bool use_recalculated) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.failed) continue;
    if (use_recalculated) {
      if (r.recalculated_energy) out.push_back(*r.recalculated_energy);
    } else {
      out.push_back(r.final_energy);
    }
  }
  return out;
}

inline std::size_t count_failed(const std::vector<TrialRecord>& records) {
  std::size_t n = 0;
  for (const auto& r : records) n += r.failed ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------
// persistence: trials as JSON-lines, summaries as JSON / CSV

inline nlohmann::json trial_to_json(const TrialRecord& rec) {
  nlohmann::json j;
  j["trial"] = rec.index;
  j["seed"] = rec.seed;
  if (rec.failed) {
    j["failed"] = true;
    j["error"] = rec.error;
    return j;
  }
  j["final_parameters"] = rec.final_parameters;
  j["final_energy"] = rec.final_energy;
  if (!rec.energy_trace.empty()) j["energy_trace"] = rec.energy_trace;
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& [basis, probs] : rec.final_group_probabilities)
    groups.push_back({{"basis", basis}, {"probabilities", probs}});
  j["group_probabilities"] = groups;
  if (rec.recalculated_energy) j["recalculated_energy"] = *rec.recalculated_energy;
  j["objective_evaluations"] = rec.objective_evaluations;
  return j;
}

inline TrialRecord trial_from_json(const nlohmann::json& j) {
  TrialRecord rec;
  rec.index = j.at("trial").get<std::size_t>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  if (j.value("failed", false)) {
    rec.failed = true;
    rec.error = j.value("error", "");
    return rec;
  }
  rec.final_parameters = j.at("final_parameters").get<std::vector<double>>();
  rec.final_energy = j.at("final_energy").get<double>();
  if (j.contains("energy_trace")) rec.energy_trace = j["energy_trace"].get<std::vector<double>>();
  for (const auto& g : j.at("group_probabilities"))
    rec.final_group_probabilities.emplace_back(g.at("basis").get<std::string>(),
                                               g.at("probabilities").get<std::vector<double>>());
  if (j.contains("recalculated_energy"))
    rec.recalculated_energy = j["recalculated_energy"].get<double>();
  rec.objective_evaluations = j.value("objective_evaluations", std::uint64_t{0});
  return rec;
}

inline void write_trials_jsonl(std::ostream& os, const std::vector<TrialRecord>& records) {
  for (const auto& rec : records) os << trial_to_json(rec).dump() << '\n';
}

inline std::vector<TrialRecord> read_trials_jsonl(std::istream& is) {
  std::vector<TrialRecord> records;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    records.push_back(trial_from_json(nlohmann::json::parse(line)));
  }
  return records;
}

inline nlohmann::json summary_to_json(const SummaryStats& s, std::size_t failed) {
  return {{"n", s.n},           {"failed", failed},
          {"median", s.median}, {"q1", s.q1},
          {"q3", s.q3},         {"fence_low", s.fence_low},
          {"fence_high", s.fence_high}, {"n_outliers", s.outliers},
          {"pct_in_accuracy", s.pct_within}, {"pct_stderr", s.pct_stderr}};
}

/// CSV row for plot scripts: config axes then the summary columns.
inline void write_summary_csv(std::ostream& os, const ExperimentConfig& config,
                              const SummaryStats& s, bool header = true) {
  if (header)
    os << "qubits,ansatz,depth,shots,maxiter,noise,mitigate,recalc,trials,seed,"
          "median,q1,q3,pct_in_accuracy,pct_stderr,n_outliers\n";
  os << config.ansatz.num_qubits << ',' << to_string(config.ansatz.form) << ','
     << config.ansatz.depth << ','
     << (config.shots.sampled_mode() ? std::to_string(config.shots.shots) : "exact") << ','
     << config.maxiter << ',' << to_string(config.noise.error_class) << ','
     << (config.mitigate ? 1 : 0) << ','
     << (config.recalc.mode == RecalcPolicy::Mode::None    ? "none"
         : config.recalc.mode == RecalcPolicy::Mode::Exact ? "exact"
             : "shots:" + std::to_string(config.recalc.shots))
     << ',' << config.trials << ',' << config.master_seed << ',';
  os.precision(17);
  os << s.median << ',' << s.q1 << ',' << s.q3 << ',' << s.pct_within << ',' << s.pct_stderr
     << ',' << s.outliers << '\n';
}

}  // namespace vqelab
