// SPDX-License-Identifier: Apache-2.0
//
// csadc - compressive acquisition and sparse recovery toolkit
// Copyright (C) 2026 The csadc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "csadc/serialize.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "csadc/errors.hpp"
#include "json.hpp"

namespace csadc {

using json = nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError("malformed number '" + std::string(text) + "'");
  return v;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

// Non-empty lines, CR stripped.
std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::size_t parse_index(std::string_view text) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError("malformed index '" + std::string(text) + "'");
  return v;
}

void expect_header(std::string_view got, std::string_view want) {
  if (got != want)
    throw ValidationError("unexpected CSV header '" + std::string(got) + "', expected '" + std::string(want) + "'");
}

}  // namespace

std::string vector_csv(const Vector& v) {
  std::string out = "index,value\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += std::to_string(i) + ',' + format_double(v[i]) + '\n';
  return out;
}

Vector parse_vector_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ValidationError("empty CSV");
  expect_header(lines.front(), "index,value");
  Vector v(static_cast<Eigen::Index>(lines.size() - 1));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != 2) throw ValidationError("CSV line " + std::to_string(r + 1) + ": expected 2 fields");
    if (parse_index(cells[0]) != r - 1) throw ValidationError("CSV line " + std::to_string(r + 1) + ": index out of order");
    v[static_cast<Eigen::Index>(r - 1)] = parse_double(cells[1]);
  }
  return v;
}

std::string matrix_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) out += (j == 0 ? "c" : ",c") + std::to_string(j);
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix parse_matrix_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ValidationError("empty CSV");
  const auto header = split(lines.front(), ',');
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] != "c" + std::to_string(j)) throw ValidationError("matrix CSV: bad header column " + std::to_string(j));
  const auto cols = static_cast<Eigen::Index>(header.size());
  Matrix m(static_cast<Eigen::Index>(lines.size() - 1), cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (static_cast<Eigen::Index>(cells.size()) != cols)
      throw ValidationError("matrix CSV line " + std::to_string(r + 1) + ": expected " + std::to_string(cols) + " fields");
    for (Eigen::Index j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(r - 1), j) = parse_double(cells[static_cast<std::size_t>(j)]);
  }
  return m;
}

std::string pscs_csv(const PscsMeasurement& m) {
  std::string out = "segment,finger,value\n";
  for (std::size_t s = 0; s < m.plan.num_segments; ++s)
    for (std::size_t f = 0; f < m.bank.fingers_per_segment; ++f)
      out += std::to_string(s) + ',' + std::to_string(f) + ',' + format_double(m.at(s, f)) + '\n';
  return out;
}

Vector parse_pscs_csv(std::string_view text, std::size_t* segments, std::size_t* fingers) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ValidationError("empty CSV");
  expect_header(lines.front(), "segment,finger,value");
  std::vector<std::array<double, 3>> rows;
  std::size_t max_seg = 0, max_finger = 0;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != 3) throw ValidationError("CSV line " + std::to_string(r + 1) + ": expected 3 fields");
    const std::size_t seg = parse_index(cells[0]), finger = parse_index(cells[1]);
    max_seg = std::max(max_seg, seg);
    max_finger = std::max(max_finger, finger);
    rows.push_back({static_cast<double>(seg), static_cast<double>(finger), parse_double(cells[2])});
  }
  const std::size_t fcount = max_finger + 1;
  if ((max_seg + 1) * fcount != rows.size()) throw ValidationError("pscs CSV: incomplete segment/finger grid");
  Vector v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto at = static_cast<std::size_t>(rows[r][0]) * fcount + static_cast<std::size_t>(rows[r][1]);
    if (at != r) throw ValidationError("pscs CSV: rows must be in segment-major order");
    v[static_cast<Eigen::Index>(r)] = rows[r][2];
  }
  if (segments) *segments = max_seg + 1;
  if (fingers) *fingers = max_finger + 1;
  return v;
}

std::string trace_csv(const ReconstructionResult& r) {
  std::string out = "iteration,objective,residual\n";
  for (std::size_t i = 0; i < r.objective_trace.size(); ++i) {
    const double res = i < r.residual_trace.size() ? r.residual_trace[i] : std::numeric_limits<double>::quiet_NaN();
    out += std::to_string(i) + ',' + format_double(r.objective_trace[i]) + ',' + format_double(res) + '\n';
  }
  return out;
}

namespace {

json parse_object(std::string_view text, std::string_view what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(std::string(what) + ": expected a JSON object");
  return j;
}

// Reads keys from one object and rejects leftovers.
class Fields {
 public:
  Fields(const json& j, std::string what, std::string_view mode_tag = {}) : j_(j), what_(std::move(what)) {
    if (!j_.is_object()) fail("expected a JSON object");
    if (j_.contains("mode")) {
      if (mode_tag.empty() || !j_["mode"].is_string() || j_["mode"].get<std::string>() != mode_tag)
        fail("unexpected mode " + j_["mode"].dump());
      seen_.insert("mode");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail("missing field '" + key + "'");
    return j_.at(key);
  }

  std::uint64_t u64(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned()) fail("field '" + key + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }
  std::size_t size(const std::string& key) { return static_cast<std::size_t>(u64(key)); }
  double real(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail("field '" + key + "' must be a number");
    return v.get<double>();
  }
  bool boolean(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_boolean()) fail("field '" + key + "' must be a boolean");
    return v.get<bool>();
  }
  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail("field '" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::vector<double> reals(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail("field '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail("field '" + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<std::uint64_t> u64s(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail("field '" + key + "' must be an array");
    std::vector<std::uint64_t> out;
    for (const auto& e : v) {
      if (!e.is_number_unsigned()) fail("field '" + key + "' must hold nonnegative integers");
      out.push_back(e.get<std::uint64_t>());
    }
    return out;
  }
  std::optional<double> optional_real(const std::string& key) {
    if (!j_.contains(key)) return std::nullopt;
    seen_.insert(key);
    if (j_.at(key).is_null()) return std::nullopt;
    return real(key);
  }
  void skip(const std::string& key) { seen_.insert(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail("unknown field '" + it.key() + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ValidationError(what_ + ": " + msg); }

 private:
  const json& j_;
  std::string what_;
  std::set<std::string> seen_;
};

template <class T>
T parse_enum(Fields& f, const std::string& key, T (*parser)(std::string_view)) {
  const std::string name = f.string(key);
  return parser(name);
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json basis_meta_obj(const BasisMeta& meta) {
  return json{{"kind", std::string(to_string(meta.kind))}, {"n", meta.n}, {"seed", meta.seed}};
}

BasisMeta basis_meta_from(const json& j) {
  Fields f(j, "basis");
  BasisMeta meta;
  meta.kind = parse_enum(f, "kind", &parse_basis_kind);
  meta.n = f.size("n");
  meta.seed = f.u64("seed");
  f.finish();
  return meta;
}

json demod_obj(const DemodConfig& c) {
  json j{{"n", c.n}, {"m", c.m}, {"filter_kind", std::string(to_string(c.filter.kind))}, {"chip_seed", c.chip_seed}};
  if (c.filter.kind == FilterKind::fir) j["taps"] = vector_json(c.filter.taps);
  return j;
}

DemodConfig demod_from(const json& j) {
  Fields f(j, "demodulator config", "serial");
  DemodConfig c;
  c.n = f.size("n");
  c.m = f.size("m");
  c.filter.kind = f.has("filter_kind") ? parse_enum(f, "filter_kind", &parse_filter_kind) : FilterKind::integrate_and_dump;
  f.skip("filter_kind");
  if (f.has("taps")) {
    const auto taps = f.reals("taps");
    c.filter.taps = Eigen::Map<const Vector>(taps.data(), static_cast<Eigen::Index>(taps.size()));
  }
  f.skip("taps");
  c.chip_seed = f.has("chip_seed") ? f.u64("chip_seed") : 0;
  f.skip("chip_seed");
  f.finish();
  if (c.filter.kind == FilterKind::integrate_and_dump && c.filter.taps.size() != 0)
    f.fail("taps are only allowed with filter_kind 'fir'");
  c.validate();
  return c;
}

json plan_obj(const WindowPlan& p) {
  return json{{"num_segments", p.num_segments},
              {"segment_len", p.segment_len},
              {"overlap", p.overlap},
              {"window", std::string(to_string(p.window))}};
}

WindowPlan plan_from(const json& j) {
  Fields f(j, "window plan");
  WindowPlan p;
  p.num_segments = f.size("num_segments");
  p.segment_len = f.size("segment_len");
  p.overlap = f.has("overlap") ? f.size("overlap") : 0;
  f.skip("overlap");
  p.window = f.has("window") ? parse_enum(f, "window", &parse_window_kind) : WindowKind::rectangular;
  f.skip("window");
  f.finish();
  p.validate();
  return p;
}

json bank_obj(const FingerBank& b) {
  json j{{"fingers_per_segment", b.fingers_per_segment},
         {"chip_seeds", b.chip_seeds},
         {"filter_kind", std::string(to_string(b.filter.kind))}};
  if (b.filter.kind == FilterKind::fir) j["taps"] = vector_json(b.filter.taps);
  return j;
}

FingerBank bank_from(const json& j) {
  Fields f(j, "finger bank");
  FingerBank b;
  b.fingers_per_segment = f.size("fingers_per_segment");
  b.chip_seeds = f.u64s("chip_seeds");
  b.filter.kind = f.has("filter_kind") ? parse_enum(f, "filter_kind", &parse_filter_kind) : FilterKind::integrate_and_dump;
  f.skip("filter_kind");
  if (f.has("taps")) {
    const auto taps = f.reals("taps");
    b.filter.taps = Eigen::Map<const Vector>(taps.data(), static_cast<Eigen::Index>(taps.size()));
  }
  f.skip("taps");
  f.finish();
  b.validate();
  return b;
}

json solver_obj(const SolverConfig& c) {
  json j{{"mode", "solver"},
         {"kind", std::string(to_string(c.kind))},
         {"max_iters", c.max_iters},
         {"residual_tol", c.residual_tol},
         {"epsilon", c.epsilon ? json(*c.epsilon) : json(nullptr)},
         {"p", c.p},
         {"lambda", c.lambda ? json(*c.lambda) : json(nullptr)},
         {"step_rule", std::string(to_string(c.step_rule))},
         {"continuation", c.continuation},
         {"k_max", c.k_max}};
  return j;
}

SolverConfig solver_from(const json& j) {
  Fields f(j, "solver config", "solver");
  SolverConfig c;
  if (f.has("kind")) c.kind = parse_enum(f, "kind", &parse_solver_kind);
  f.skip("kind");
  if (f.has("max_iters")) c.max_iters = f.size("max_iters");
  f.skip("max_iters");
  if (f.has("residual_tol")) c.residual_tol = f.real("residual_tol");
  f.skip("residual_tol");
  c.epsilon = f.optional_real("epsilon");
  if (f.has("p")) c.p = f.real("p");
  f.skip("p");
  c.lambda = f.optional_real("lambda");
  if (f.has("step_rule")) c.step_rule = parse_enum(f, "step_rule", &parse_step_rule);
  f.skip("step_rule");
  if (f.has("continuation")) c.continuation = f.boolean("continuation");
  f.skip("continuation");
  if (f.has("k_max")) c.k_max = f.size("k_max");
  f.skip("k_max");
  f.finish();
  c.validate();
  return c;
}

json energy_obj(const EnergyModel& m) {
  return json{{"current_ma", m.current_ma},
              {"voltage_v", m.voltage_v},
              {"bitrate_bps", m.bitrate_bps},
              {"bits_per_sample", m.bits_per_sample}};
}

EnergyModel energy_from(const json& j) {
  Fields f(j, "energy model");
  EnergyModel m;
  if (f.has("current_ma")) m.current_ma = f.real("current_ma");
  f.skip("current_ma");
  if (f.has("voltage_v")) m.voltage_v = f.real("voltage_v");
  f.skip("voltage_v");
  if (f.has("bitrate_bps")) m.bitrate_bps = f.real("bitrate_bps");
  f.skip("bitrate_bps");
  if (f.has("bits_per_sample")) m.bits_per_sample = f.size("bits_per_sample");
  f.skip("bits_per_sample");
  f.finish();
  m.validate();
  return m;
}

}  // namespace

std::string basis_meta_json(const BasisMeta& meta) { return basis_meta_obj(meta).dump(2); }
BasisMeta parse_basis_meta(std::string_view text) { return basis_meta_from(parse_object(text, "basis")); }

std::string operator_meta_json(const MeasurementOperator& op, double noise_sigma) {
  json j{{"kind", std::string(to_string(op.provenance()))},
         {"l", op.l()},
         {"n", op.n()},
         {"seed", op.seed()},
         {"effective_seed", op.effective_seed()},
         {"noise_sigma", noise_sigma}};
  if (op.composed_with()) j["composed_with"] = basis_meta_obj(*op.composed_with());
  return j.dump(2);
}

std::string demod_config_json(const DemodConfig& c) { return demod_obj(c).dump(2); }
DemodConfig parse_demod_config(std::string_view text) { return demod_from(parse_object(text, "demodulator config")); }

std::string window_plan_json(const WindowPlan& plan) { return plan_obj(plan).dump(2); }
WindowPlan parse_window_plan(std::string_view text) { return plan_from(parse_object(text, "window plan")); }

std::string finger_bank_json(const FingerBank& bank) { return bank_obj(bank).dump(2); }
FingerBank parse_finger_bank(std::string_view text) { return bank_from(parse_object(text, "finger bank")); }

std::string solver_config_json(const SolverConfig& c) { return solver_obj(c).dump(2); }
SolverConfig parse_solver_config(std::string_view text) { return solver_from(parse_object(text, "solver config")); }

std::string sweep_spec_json(const SweepSpec& s) {
  json solver = solver_obj(s.solver);
  solver.erase("mode");
  json j{{"mode", "sweep"},
         {"n", s.n},
         {"k_list", s.k_list},
         {"l_list", s.l_list},
         {"trials", s.trials},
         {"base_seed", s.base_seed},
         {"pipeline", std::string(to_string(s.pipeline))},
         {"solver", solver},
         {"basis", std::string(to_string(s.basis))},
         {"matrix", std::string(to_string(s.matrix))},
         {"segments", s.segments},
         {"amplitude_low", s.amplitude_low},
         {"amplitude_high", s.amplitude_high},
         {"sign_symmetric", s.sign_symmetric},
         {"noise_sigma", s.noise_sigma}};
  return j.dump(2);
}

SweepSpec parse_sweep_spec(std::string_view text) {
  const json j = parse_object(text, "sweep config");
  Fields f(j, "sweep config", "sweep");
  SweepSpec s;
  s.n = f.size("n");
  {
    const auto ks = f.u64s("k_list");
    s.k_list.assign(ks.begin(), ks.end());
    const auto ls = f.u64s("l_list");
    s.l_list.assign(ls.begin(), ls.end());
  }
  s.trials = f.size("trials");
  if (f.has("base_seed")) s.base_seed = f.u64("base_seed");
  f.skip("base_seed");
  if (f.has("pipeline")) s.pipeline = parse_enum(f, "pipeline", &parse_pipeline);
  f.skip("pipeline");
  if (f.has("solver")) s.solver = solver_from(f.raw("solver"));
  f.skip("solver");
  if (f.has("basis")) s.basis = parse_enum(f, "basis", &parse_basis_kind);
  f.skip("basis");
  if (f.has("matrix")) s.matrix = parse_enum(f, "matrix", &parse_matrix_kind);
  f.skip("matrix");
  if (f.has("segments")) s.segments = f.size("segments");
  f.skip("segments");
  if (f.has("amplitude_low")) s.amplitude_low = f.real("amplitude_low");
  f.skip("amplitude_low");
  if (f.has("amplitude_high")) s.amplitude_high = f.real("amplitude_high");
  f.skip("amplitude_high");
  if (f.has("sign_symmetric")) s.sign_symmetric = f.boolean("sign_symmetric");
  f.skip("sign_symmetric");
  if (f.has("noise_sigma")) s.noise_sigma = f.real("noise_sigma");
  f.skip("noise_sigma");
  f.finish();
  s.validate();
  return s;
}

std::string energy_model_json(const EnergyModel& m) { return energy_obj(m).dump(2); }
EnergyModel parse_energy_model(std::string_view text) { return energy_from(parse_object(text, "energy model")); }

std::string rate_report_json(const RateReductionReport& r) {
  json j{{"n", r.n},
         {"l", r.l},
         {"compression_ratio", r.compression_ratio},
         {"raw_airtime_s", r.raw_airtime_s},
         {"compressed_airtime_s", r.compressed_airtime_s},
         {"raw_energy_j", r.raw_energy_j},
         {"compressed_energy_j", r.compressed_energy_j},
         {"savings_fraction", r.savings_fraction},
         {"model", energy_obj(r.model)}};
  return j.dump(2);
}

namespace {

json metrics_obj(const RecoveryMetrics& m) {
  json snr = std::isinf(m.reconstruction_snr_db) ? json(m.reconstruction_snr_db > 0 ? "+inf" : "-inf")
                                                 : json(m.reconstruction_snr_db);
  return json{{"support_exact", m.support_exact},
              {"coeff_err_inf", m.coeff_err_inf},
              {"reconstruction_snr_db", snr},
              {"iterations", m.iterations}};
}

json noise_fields(json j, double sigma, Seed seed) {
  j["noise_sigma"] = sigma;
  j["noise_seed"] = seed;
  return j;
}

}  // namespace

std::string recovery_metrics_json(const RecoveryMetrics& m) { return metrics_obj(m).dump(2); }

std::string reconstruction_report_json(const ReconstructionResult& r, const SolverConfig& solver,
                                       const std::optional<RecoveryMetrics>& metrics) {
  json j{{"solver", std::string(to_string(solver.kind))},
         {"converged", r.converged},
         {"stop_reason", std::string(to_string(r.stop_reason))},
         {"iterations", r.iterations},
         {"residual_norm", r.residual_norm},
         {"nonzeros", r.alpha_star.sparsity()}};
  if (solver.kind != SolverKind::omp) {
    j["lambda"] = r.lambda;
    j["epsilon"] = r.epsilon;
  }
  if (!r.message.empty()) j["message"] = r.message;
  if (metrics) j["truth"] = metrics_obj(*metrics);
  return j.dump(2);
}

std::string acquire_config_json(const AcquireConfig& c) {
  json j;
  switch (c.mode) {
    case AcquireMode::discrete:
      j = json{{"n", c.n}, {"l", c.l}, {"matrix", std::string(to_string(c.matrix))}, {"matrix_seed", c.matrix_seed}};
      break;
    case AcquireMode::serial:
      j = demod_obj(c.demod);
      break;
    case AcquireMode::pscs:
      j = json{{"n", c.n}, {"plan", plan_obj(c.plan)}, {"bank", bank_obj(c.bank)}};
      break;
  }
  j["mode"] = std::string(to_string(c.mode));
  j["basis"] = basis_meta_obj(c.basis);
  return noise_fields(std::move(j), c.noise_sigma, c.noise_seed).dump(2);
}

AcquireConfig parse_acquire_config(std::string_view text) {
  const json j = parse_object(text, "acquisition config");
  if (!j.contains("mode") || !j["mode"].is_string())
    throw ValidationError("acquisition config: missing string field 'mode'");
  AcquireConfig c;
  c.mode = parse_acquire_mode(j["mode"].get<std::string>());
  const std::string tag(to_string(c.mode));
  json rest = j;
  // Shared fields first; the mode-specific block must then be consumed whole.
  Fields shared(j, "acquisition config", tag);
  c.basis = basis_meta_from(shared.raw("basis"));
  if (shared.has("noise_sigma")) c.noise_sigma = shared.real("noise_sigma");
  if (shared.has("noise_seed")) c.noise_seed = shared.u64("noise_seed");
  for (const char* key : {"basis", "noise_sigma", "noise_seed"}) rest.erase(key);
  switch (c.mode) {
    case AcquireMode::discrete: {
      Fields f(rest, "acquisition config", tag);
      c.n = f.size("n");
      c.l = f.size("l");
      if (f.has("matrix")) c.matrix = parse_enum(f, "matrix", &parse_matrix_kind);
      f.skip("matrix");
      if (f.has("matrix_seed")) c.matrix_seed = f.u64("matrix_seed");
      f.skip("matrix_seed");
      f.finish();
      break;
    }
    case AcquireMode::serial:
      c.demod = demod_from(rest);
      c.n = c.demod.n;
      break;
    case AcquireMode::pscs: {
      Fields f(rest, "acquisition config", tag);
      c.n = f.size("n");
      c.plan = plan_from(f.raw("plan"));
      c.bank = bank_from(f.raw("bank"));
      f.finish();
      break;
    }
  }
  c.validate();
  return c;
}

std::string truth_json(const TruthRecord& t) {
  std::vector<std::size_t> support = t.alpha.support();
  json j{{"basis", basis_meta_obj(t.basis)},
         {"k", t.profile.k},
         {"amplitude_low", t.profile.amplitude_low},
         {"amplitude_high", t.profile.amplitude_high},
         {"sign_symmetric", t.profile.sign_symmetric},
         {"seed", t.seed},
         {"support", support},
         {"alpha", vector_json(t.alpha.values)}};
  return j.dump(2);
}

TruthRecord parse_truth(std::string_view text) {
  const json j = parse_object(text, "truth");
  Fields f(j, "truth");
  TruthRecord t;
  t.basis = basis_meta_from(f.raw("basis"));
  t.profile.k = f.size("k");
  t.profile.amplitude_low = f.real("amplitude_low");
  t.profile.amplitude_high = f.real("amplitude_high");
  t.profile.sign_symmetric = f.boolean("sign_symmetric");
  t.seed = f.u64("seed");
  f.skip("support");  // derived from alpha
  const auto alpha = f.reals("alpha");
  t.alpha.values = Eigen::Map<const Vector>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  f.finish();
  if (t.alpha.n() != t.basis.n) throw DimensionError("truth: alpha length does not match basis dimension");
  return t;
}

std::string energy_study_json(const EnergyStudy& s) {
  json j{{"mode", "energy"},
         {"n", s.n},
         {"l", s.l},
         {"voltage_v", s.voltage_v},
         {"bitrate_bps", s.bitrate_bps},
         {"bits_per_sample", s.bits_per_sample},
         {"low_power_current_ma", s.low_power_current_ma},
         {"high_power_current_ma", s.high_power_current_ma}};
  return j.dump(2);
}

EnergyStudy parse_energy_study(std::string_view text) {
  const json j = parse_object(text, "energy config");
  Fields f(j, "energy config", "energy");
  EnergyStudy s;
  auto opt_size = [&f](const char* key, std::size_t& out) {
    if (f.has(key)) out = f.size(key);
    f.skip(key);
  };
  auto opt_real = [&f](const char* key, double& out) {
    if (f.has(key)) out = f.real(key);
    f.skip(key);
  };
  opt_size("n", s.n);
  opt_size("l", s.l);
  opt_real("voltage_v", s.voltage_v);
  opt_real("bitrate_bps", s.bitrate_bps);
  opt_size("bits_per_sample", s.bits_per_sample);
  opt_real("low_power_current_ma", s.low_power_current_ma);
  opt_real("high_power_current_ma", s.high_power_current_ma);
  f.finish();
  s.validate();
  return s;
}

std::string energy_study_report_json(const EnergyStudy& s, const EnergyStudyReport& r) {
  auto report = [](const RateReductionReport& x) {
    return json{{"current_ma", x.model.current_ma},
                {"raw_airtime_s", x.raw_airtime_s},
                {"compressed_airtime_s", x.compressed_airtime_s},
                {"raw_energy_j", x.raw_energy_j},
                {"compressed_energy_j", x.compressed_energy_j}};
  };
  json j{{"n", s.n},
         {"l", s.l},
         {"compression_ratio", r.high_power.compression_ratio},
         {"savings_fraction", r.high_power.savings_fraction},
         {"low_power", report(r.low_power)},
         {"high_power", report(r.high_power)},
         {"energy_ratio_low_to_high", r.energy_ratio},
         {"assumptions", json{{"voltage_v", s.voltage_v},
                              {"bitrate_bps", s.bitrate_bps},
                              {"bits_per_sample", s.bits_per_sample},
                              {"note", "voltage, bitrate and sample width are assumed; radio overhead and CPU cost are excluded"}}}};
  return j.dump(2);
}

std::string config_mode(std::string_view text) {
  const json j = parse_object(text, "config");
  if (!j.contains("mode")) return {};
  if (!j["mode"].is_string()) throw ValidationError("config: field 'mode' must be a string");
  return j["mode"].get<std::string>();
}

}  // namespace csadc
