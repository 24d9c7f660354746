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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqelab/harness.hpp"
#include "vqelab/mitigation.hpp"
#include "vqelab/similarity.hpp"
#include "vqelab/spectrum.hpp"

namespace {

using namespace vqelab;

struct CommonOptions {
  int qubits = 2;
  std::string hamiltonian_file;
  std::string ansatz = "ry";
  std::size_t depth = 1;
  std::string shots = "1024";
  std::size_t maxiter = 1000;
  std::string noise = "none";
  std::string calibration;
  bool mitigate = false;
  bool mitigate_final_only = false;
  std::uint64_t mitigation_shots = 0;
  std::string recalc = "none";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  double spsa_a = 0.0;
  double spsa_c = 0.1;
  bool no_trace = false;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--qubits", opt.qubits, "builtin Hamiltonian size (2 or 4)");
  cmd->add_option("--hamiltonian-file", opt.hamiltonian_file,
                  "Pauli-sum text file instead of a builtin Hamiltonian");
  cmd->add_option("--ansatz", opt.ansatz, "variational form: ry|ryrz")
      ->check(CLI::IsMember({"ry", "ryrz"}));
  cmd->add_option("--depth", opt.depth, "ansatz depth d >= 1");
  cmd->add_option("--shots", opt.shots, "shots per energy evaluation, or 'exact'");
  cmd->add_option("--maxiter", opt.maxiter, "SPSA iteration budget");
  cmd->add_option("--noise", opt.noise, "error classes: none|gates|readout|all")
      ->check(CLI::IsMember({"none", "gates", "readout", "all"}));
  cmd->add_option("--calibration", opt.calibration, "device calibration file (JSON)");
  cmd->add_flag("--mitigate", opt.mitigate, "apply readout-error mitigation");
  cmd->add_flag("--mitigate-final-only", opt.mitigate_final_only,
                "mitigate only the final readout, not the optimization loop");
  cmd->add_option("--mitigation-shots", opt.mitigation_shots,
                  "shots per calibration-matrix column (default: same as --shots)");
  cmd->add_option("--recalc", opt.recalc, "final-state recalculation: none|exact|shots:<n>");
  cmd->add_option("--trials", opt.trials, "number of independent trials");
  cmd->add_option("--seed", opt.seed, "master seed");
  cmd->add_option("--out", opt.out, "trial records output (JSON lines)");
  cmd->add_option("--threads", opt.threads,
                  "worker threads (default: VQE_LAB_THREADS env var, else 1)");
  cmd->add_option("--spsa-a", opt.spsa_a, "fixed SPSA gain a (default: calibrated)");
  cmd->add_option("--spsa-c", opt.spsa_c, "SPSA perturbation c");
  cmd->add_flag("--no-trace", opt.no_trace, "omit per-iteration energy traces from records");
}

PauliSum load_hamiltonian(const CommonOptions& opt) {
  if (!opt.hamiltonian_file.empty()) {
    std::ifstream in(opt.hamiltonian_file);
    if (!in) throw std::runtime_error("cannot open " + opt.hamiltonian_file);
    return parse_pauli_sum(in);
  }
  return builtin_hamiltonian(opt.qubits);
}

ExperimentConfig build_config(const CommonOptions& opt) {
  ExperimentConfig cfg;
  cfg.hamiltonian = load_hamiltonian(opt);
  cfg.ansatz.form = ansatz_form_from_string(opt.ansatz);
  cfg.ansatz.num_qubits = cfg.hamiltonian.num_qubits();
  cfg.ansatz.depth = opt.depth;
  cfg.shots = opt.shots == "exact" ? ShotPolicy::exact()
                                   : ShotPolicy::sampled(std::stoull(opt.shots));
  cfg.maxiter = opt.maxiter;
  cfg.noise.error_class = error_class_from_string(opt.noise);
  if (!opt.calibration.empty()) cfg.noise.calibration = DeviceCalibration::load(opt.calibration);
  cfg.mitigate = opt.mitigate;
  cfg.mitigate_final_only = opt.mitigate_final_only;
  cfg.mitigation_shots = opt.mitigation_shots;
  if (opt.recalc == "none") {
    cfg.recalc = RecalcPolicy::none();
  } else if (opt.recalc == "exact") {
    cfg.recalc = RecalcPolicy::exact();
  } else if (opt.recalc.rfind("shots:", 0) == 0) {
    cfg.recalc = RecalcPolicy::with_shots(std::stoull(opt.recalc.substr(6)));
  } else {
    throw std::invalid_argument("--recalc must be none|exact|shots:<n>");
  }
  cfg.trials = opt.trials;
  cfg.master_seed = opt.seed;
  cfg.record_trace = !opt.no_trace;
  cfg.spsa_a = opt.spsa_a;
  cfg.spsa_c = opt.spsa_c;
  return cfg;
}

std::size_t resolve_threads(int flag_value) {
  if (flag_value > 0) return static_cast<std::size_t>(flag_value);
  if (const char* env = std::getenv("VQE_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

int cmd_eig(const CommonOptions& opt) {
  const PauliSum h = load_hamiltonian(opt);
  const Spectrum spectrum = diagonalize(h);
  std::printf("terms: %zu, qubits: %zu\n", h.size(), h.num_qubits());
  std::printf("ground energy [Ha]: %.5f\n", spectrum.ground_energy);
  std::printf("spectrum [Ha]:");
  for (double e : spectrum.eigenvalues) std::printf(" %.5f", e);
  std::printf("\n");
  return 0;
}

void print_summary(const char* label, const SummaryStats& s, std::size_t failed) {
  std::printf("%s: n=%zu failed=%zu median=%.5f q1=%.5f q3=%.5f pct_in_accuracy=%.1f±%.1f "
              "outliers=%zu\n",
              label, s.n, failed, s.median, s.q1, s.q3, s.pct_within, s.pct_stderr, s.outliers);
}

int cmd_sweep(const CommonOptions& opt, const std::string& summary_json_path,
              const std::string& summary_csv_path) {
  ExperimentConfig cfg = build_config(opt);
  const auto records = run_sweep(cfg, resolve_threads(opt.threads));
  if (!opt.out.empty()) {
    std::ofstream os(opt.out);
    if (!os) throw std::runtime_error("cannot write " + opt.out);
    write_trials_jsonl(os, records);
  }
  const std::size_t failed = count_failed(records);
  const auto finals = collect_energies(records, false);
  const SummaryStats s = summarize(finals, kReferenceGroundEnergy, kChemicalAccuracy);
  print_summary("final estimates", s, failed);

  std::optional<SummaryStats> recalc_summary;
  const auto recalcs = collect_energies(records, true);
  if (!recalcs.empty()) {
    recalc_summary = summarize(recalcs, kReferenceGroundEnergy, kChemicalAccuracy);
    print_summary("recalculated", *recalc_summary, failed);
  }

  if (!summary_json_path.empty()) {
    nlohmann::json j = summary_to_json(s, failed);
    if (recalc_summary) j["recalculated"] = summary_to_json(*recalc_summary, failed);
    std::ofstream os(summary_json_path);
    if (!os) throw std::runtime_error("cannot write " + summary_json_path);
    os << j.dump(2) << '\n';
  }
  if (!summary_csv_path.empty()) {
    std::ofstream os(summary_csv_path);
    if (!os) throw std::runtime_error("cannot write " + summary_csv_path);
    write_summary_csv(os, cfg, s);
  }
  return 0;
}

int cmd_vqe(const CommonOptions& opt) {
  CommonOptions single = opt;
  single.trials = 1;
  ExperimentConfig cfg = build_config(single);
  const auto records = run_sweep(cfg, 1);
  const TrialRecord& rec = records.front();
  if (rec.failed) {
    std::fprintf(stderr, "trial failed: %s\n", rec.error.c_str());
    return 1;
  }
  std::printf("seed: %llu\n", static_cast<unsigned long long>(rec.seed));
  std::printf("final energy [Ha]: %.5f\n", rec.final_energy);
  if (rec.recalculated_energy)
    std::printf("recalculated energy [Ha]: %.5f\n", *rec.recalculated_energy);
  std::printf("objective evaluations: %llu\n",
              static_cast<unsigned long long>(rec.objective_evaluations));
  for (const auto& [basis, probs] : rec.final_group_probabilities) {
    std::printf("group %s probabilities:", basis.c_str());
    for (double p : probs) std::printf(" %.6f", p);
    std::printf("\n");
  }
  if (!opt.out.empty()) {
    std::ofstream os(opt.out);
    if (!os) throw std::runtime_error("cannot write " + opt.out);
    write_trials_jsonl(os, records);
  }
  return 0;
}

int cmd_stats(const std::string& in_path, bool use_recalc, double reference, double band,
              const std::string& json_path, const std::string& csv_path) {
  std::ifstream is(in_path);
  if (!is) throw std::runtime_error("cannot open " + in_path);
  const auto records = read_trials_jsonl(is);
  const auto energies = collect_energies(records, use_recalc);
  const SummaryStats s = summarize(energies, reference, band);
  const std::size_t failed = count_failed(records);
  print_summary(use_recalc ? "recalculated" : "final estimates", s, failed);
  if (!json_path.empty()) {
    std::ofstream os(json_path);
    if (!os) throw std::runtime_error("cannot write " + json_path);
    os << summary_to_json(s, failed).dump(2) << '\n';
  }
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    if (!os) throw std::runtime_error("cannot write " + csv_path);
    os << "n,failed,median,q1,q3,pct_in_accuracy,pct_stderr,n_outliers\n";
    os.precision(17);
    os << s.n << ',' << failed << ',' << s.median << ',' << s.q1 << ',' << s.q3 << ','
       << s.pct_within << ',' << s.pct_stderr << ',' << s.outliers << '\n';
  }
  return 0;
}

int cmd_similarity(const std::string& in_path, const std::string& measure_name, int circuit,
                   const std::string& out_path, const CommonOptions& opt) {
  std::ifstream is(in_path);
  if (!is) throw std::runtime_error("cannot open " + in_path);
  const auto records = read_trials_jsonl(is);

  std::vector<std::vector<double>> vectors;
  std::vector<double> energies;
  std::vector<std::size_t> trial_ids;
  for (const auto& rec : records) {
    if (rec.failed) continue;
    if (static_cast<std::size_t>(circuit) >= rec.final_group_probabilities.size())
      throw std::runtime_error("trial " + std::to_string(rec.index) +
                               " has no circuit " + std::to_string(circuit) + " vector");
    vectors.push_back(rec.final_group_probabilities[static_cast<std::size_t>(circuit)].second);
    energies.push_back(rec.recalculated_energy.value_or(rec.final_energy));
    trial_ids.push_back(rec.index);
  }
  if (vectors.empty()) throw std::runtime_error("no successful trials in " + in_path);

  CommonOptions h_opt = opt;
  if (h_opt.hamiltonian_file.empty()) {
    std::size_t q = 0;
    while ((std::size_t{1} << q) < vectors.front().size()) ++q;
    h_opt.qubits = static_cast<int>(q);
  }
  const Spectrum spectrum = diagonalize(load_hamiltonian(h_opt));

  const SimilarityMeasure measure = measure_from_string(measure_name);
  const std::vector<double> averaged = averaged_similarity(vectors, measure);
  const std::vector<TrialClass> labels = classify(energies, averaged, spectrum);

  nlohmann::json out;
  out["measure"] = measure_name;
  out["circuit"] = circuit;
  out["ground_energy"] = spectrum.ground_energy;
  nlohmann::json rows = nlohmann::json::array();
  std::size_t n_ground = 0, n_excited = 0, n_erroneous = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    rows.push_back({{"trial", trial_ids[i]},
                    {"energy", energies[i]},
                    {"averaged_similarity", averaged[i]},
                    {"class", to_string(labels[i])}});
    if (labels[i] == TrialClass::GroundLike) ++n_ground;
    else if (labels[i] == TrialClass::Excited) ++n_excited;
    else ++n_erroneous;
  }
  out["trials"] = rows;
  out["counts"] = {{"ground", n_ground}, {"excited", n_excited}, {"erroneous", n_erroneous}};

  if (out_path.empty()) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot write " + out_path);
    os << out.dump(2) << '\n';
  }
  std::printf("classified %zu trials: %zu ground-like, %zu excited, %zu erroneous\n",
              vectors.size(), n_ground, n_excited, n_erroneous);
  return 0;
}

int cmd_mitigate_test(const CommonOptions& opt) {
  NoiseConfig noise;
  noise.error_class = error_class_from_string(opt.noise);
  if (!opt.calibration.empty()) noise.calibration = DeviceCalibration::load(opt.calibration);
  const std::size_t q = static_cast<std::size_t>(opt.qubits);
  const std::uint64_t shots = opt.shots == "exact" ? 100000 : std::stoull(opt.shots);
  Rng rng(opt.seed);
  const MitigationModel model = build_mitigation(noise, q, shots, rng);

  nlohmann::json j;
  j["qubits"] = q;
  j["shots_per_column"] = model.shots_per_column;
  j["condition_estimate"] = model.condition_estimate;
  j["ill_conditioned"] = model.ill_conditioned();
  const std::size_t n = model.calibration_matrix.dim();
  nlohmann::json matrix = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t col = 0; col < n; ++col) row.push_back(model.calibration_matrix.entry(i, col));
    matrix.push_back(row);
  }
  j["calibration_matrix"] = matrix;

  // round trip: push each basis distribution through the model and recover it
  double worst = 0.0;
  for (std::size_t basis = 0; basis < n; ++basis) {
    std::vector<double> truth(n, 0.0);
    truth[basis] = 1.0;
    const auto noisy = model.calibration_matrix.apply(truth);
    const auto recovered = mitigate(model, noisy).probabilities;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(recovered[i] - truth[i]));
  }
  j["basis_roundtrip_max_error"] = worst;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VQE ground-state experiments for the H2 molecule on simulated "
               "ideal and noisy quantum processors"};
  app.require_subcommand(1);

  CommonOptions opt;

  CLI::App* eig = app.add_subcommand("eig", "exact spectrum of a Hamiltonian");
  eig->add_option("--builtin", opt.qubits, "builtin Hamiltonian size (2 or 4)");
  eig->add_option("--hamiltonian-file", opt.hamiltonian_file, "Pauli-sum text file");

  CLI::App* vqe = app.add_subcommand("vqe", "run one VQE trial");
  add_common_flags(vqe, opt);

  CLI::App* sweep = app.add_subcommand("sweep", "run N seeded VQE trials and summarize");
  add_common_flags(sweep, opt);
  std::string summary_json, summary_csv;
  sweep->add_option("--summary-json", summary_json, "summary output (JSON)");
  sweep->add_option("--summary-csv", summary_csv, "summary output (CSV)");

  CLI::App* stats = app.add_subcommand("stats", "summarize a trials file");
  std::string stats_in, stats_json, stats_csv;
  bool stats_recalc = false;
  double stats_ref = kReferenceGroundEnergy, stats_band = kChemicalAccuracy;
  stats->add_option("--in", stats_in, "trials JSON-lines file")->required();
  stats->add_flag("--recalc", stats_recalc, "summarize recalculated energies");
  stats->add_option("--reference", stats_ref, "reference energy [Ha]");
  stats->add_option("--band", stats_band, "accuracy half-width [Ha]");
  stats->add_option("--json", stats_json, "summary output (JSON)");
  stats->add_option("--csv", stats_csv, "summary output (CSV)");

  CLI::App* sim = app.add_subcommand("similarity", "probability-vector similarity analysis");
  std::string sim_in, sim_measure = "jt", sim_out;
  int sim_circuit = 0;
  sim->add_option("--in", sim_in, "trials JSON-lines file")->required();
  sim->add_option("--measure", sim_measure, "jt|scalar")
      ->check(CLI::IsMember({"jt", "scalar"}));
  sim->add_option("--circuit", sim_circuit, "measurement group index (0 or 1)")
      ->check(CLI::Range(0, 1));
  sim->add_option("--out", sim_out, "report output (JSON)");
  sim->add_option("--qubits", opt.qubits, "Hamiltonian size for the spectrum");
  sim->add_option("--hamiltonian-file", opt.hamiltonian_file, "Pauli-sum text file");

  CLI::App* mit = app.add_subcommand("mitigate-test", "measure and verify a calibration matrix");
  mit->add_option("--qubits", opt.qubits, "register size");
  mit->add_option("--noise", opt.noise, "error classes: none|gates|readout|all")
      ->check(CLI::IsMember({"none", "gates", "readout", "all"}));
  mit->add_option("--calibration", opt.calibration, "device calibration file (JSON)");
  mit->add_option("--shots", opt.shots, "shots per calibration column");
  mit->add_option("--seed", opt.seed, "master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eig->parsed()) return cmd_eig(opt);
    if (vqe->parsed()) return cmd_vqe(opt);
    if (sweep->parsed()) return cmd_sweep(opt, summary_json, summary_csv);
    if (stats->parsed())
      return cmd_stats(stats_in, stats_recalc, stats_ref, stats_band, stats_json, stats_csv);
    if (sim->parsed()) return cmd_similarity(sim_in, sim_measure, sim_circuit, sim_out, opt);
    if (mit->parsed()) return cmd_mitigate_test(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
