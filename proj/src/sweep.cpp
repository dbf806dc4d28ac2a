// Copyright 2026 The cavarray Authors
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

#include "cavarray/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "cavarray/error.hpp"

namespace cavarray {

namespace {

constexpr const char* kSweepParameters[] = {"delta", "omega", "zJ", "U",
                                            "zV",    "t_ch",  "n_A0", "n_B0"};

bool is_occupation(const std::string& name) { return name == "n_A0" || name == "n_B0"; }

void assign(ModelParams& p, double& n_A0, double& n_B0, const std::string& name, double v) {
  if (name == "delta") p.delta = v;
  else if (name == "omega") p.omega = v;
  else if (name == "zJ") p.zJ = v;
  else if (name == "U") p.U = v;
  else if (name == "zV") p.zV = v;
  else if (name == "t_ch") p.t_ch = v;
  else if (name == "n_A0") n_A0 = v;
  else if (name == "n_B0") n_B0 = v;
  else throw Error(ErrorKind::InvalidInput, "unknown sweep parameter: " + name);
}

void validate_axis(const SweepAxis& axis) {
  if (!is_sweep_parameter(axis.name)) {
    throw Error(ErrorKind::InvalidInput, "unknown sweep parameter: " + axis.name);
  }
  if (axis.n_points < 2) throw Error(ErrorKind::InvalidInput, "axis needs n_points >= 2");
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || !(axis.max > axis.min)) {
    throw Error(ErrorKind::InvalidInput, "axis " + axis.name + " needs finite min < max");
  }
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(n_points);
  for (int k = 0; k < n_points; ++k) v[k] = min + (max - min) * k / (n_points - 1);
  return v;
}

bool is_sweep_parameter(const std::string& name) {
  return std::find(std::begin(kSweepParameters), std::end(kSweepParameters), name) !=
         std::end(kSweepParameters);
}

void SweepSpec::validate() const {
  base.validate();
  validate_axis(axis1);
  if (axis2) {
    validate_axis(*axis2);
    if (axis2->name == axis1.name) {
      throw Error(ErrorKind::InvalidInput, "sweep axes must name distinct parameters");
    }
  }
  if (t_ch_per_U && (axis1.name == "t_ch" || (axis2 && axis2->name == "t_ch"))) {
    throw Error(ErrorKind::InvalidInput, "t_ch_per_U conflicts with a t_ch axis");
  }
  if (!(t_final > 0.0)) throw Error(ErrorKind::InvalidInput, "t_final must be positive");
  if (workers < 0) throw Error(ErrorKind::InvalidInput, "workers must be >= 0");
}

const PhaseRow& PhaseTable::at(std::size_t i1, std::size_t i2) const {
  const std::size_t n2 = axis2_values.empty() ? 1 : axis2_values.size();
  return rows.at(i1 * n2 + i2);
}

NodeSetup node_setup(const SweepSpec& spec, double v1, std::optional<double> v2) {
  NodeSetup s{spec.base, spec.seed};
  double n_A0 = spec.n_A0, n_B0 = spec.n_B0;
  assign(s.params, n_A0, n_B0, spec.axis1.name, v1);
  if (spec.axis2 && v2) assign(s.params, n_A0, n_B0, spec.axis2->name, *v2);
  if (spec.t_ch_per_U) s.params.t_ch = *spec.t_ch_per_U * s.params.U;
  if (is_occupation(spec.axis1.name) || (spec.axis2 && is_occupation(spec.axis2->name))) {
    s.seed = FockOccupation{n_A0, n_B0};
  }
  s.params.validate();
  return s;
}

PhaseRow evaluate_node(const SweepSpec& spec, double v1, std::optional<double> v2) {
  PhaseRow row;
  row.axis1 = v1;
  row.axis2 = v2;
  double t_final = spec.t_final;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      const NodeSetup s = node_setup(spec, v1, v2);
      const PointResult point =
          simulate(s.params, s.seed, t_final, spec.integrator, spec.truncation);
      row.n_max_used = point.n_max_used;
      row.delta_n = order_parameter(point.trajectory.final_state);
      if (!point.trajectory.samples.empty()) {
        row.residual = point.trajectory.samples.back().residual;
      }
      const PhaseLabel label = classify(point.trajectory, spec.classifier);
      row.kind = label.kind;
      row.delta_n = label.delta_n;
      row.period = label.period;
      row.residual = label.residual;
      row.detail.clear();
      return row;
    } catch (const Error& e) {
      row.detail = std::string(to_string(e.kind())) + ": " + e.what();
      if (e.kind() != ErrorKind::Inconclusive) return row;
      t_final *= 2.0;
    }
  }
  return row;
}

PhaseTable run_sweep(const SweepSpec& spec, const SweepProgress& progress) {
  spec.validate();
  PhaseTable table;
  table.axis1_name = spec.axis1.name;
  table.axis1_values = spec.axis1.values();
  if (spec.axis2) {
    table.axis2_name = spec.axis2->name;
    table.axis2_values = spec.axis2->values();
  }
  const std::size_t n1 = table.axis1_values.size();
  const std::size_t n2 = spec.axis2 ? table.axis2_values.size() : 1;
  const std::size_t total = n1 * n2;
  table.rows.resize(total);

  int workers = spec.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<int>(std::min<std::size_t>(workers, total));

  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t done = 0;
  auto work = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const double v1 = table.axis1_values[k / n2];
      std::optional<double> v2;
      if (spec.axis2) v2 = table.axis2_values[k % n2];
      PhaseRow row = evaluate_node(spec, v1, v2);
      std::lock_guard lock(mutex);
      table.rows[k] = std::move(row);
      ++done;
      if (progress) progress(done, total);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return table;
}

void write_csv(std::ostream& out, const PhaseTable& table) {
  out << "axis1,axis2,phase,delta_n,period,residual,n_max_used\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(12);
  for (const auto& r : table.rows) {
    out << r.axis1 << ',';
    if (r.axis2) out << *r.axis2;
    out << ',' << (r.kind ? to_string(*r.kind) : std::string_view("Inconclusive")) << ','
        << r.delta_n << ',';
    if (r.period) out << *r.period;
    out << ',' << r.residual << ',' << r.n_max_used << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

std::optional<double> first_crystal_transition(const PhaseTable& table) {
  if (!table.axis2_values.empty()) {
    throw Error(ErrorKind::InvalidInput, "first_crystal_transition needs a one-dimensional table");
  }
  const PhaseRow* below = nullptr;
  for (const auto& row : table.rows) {
    if (!row.kind) continue;
    if (*row.kind == PhaseKind::Crystal) {
      if (!below) return std::nullopt;
      return 0.5 * (below->axis1 + row.axis1);
    }
    below = &row;
  }
  return std::nullopt;
}

std::vector<Polyline> contour_zero(const std::vector<double>& f, const std::vector<double>& x1,
                                   const std::vector<double>& x2) {
  const long n1 = static_cast<long>(x1.size()), n2 = static_cast<long>(x2.size());
  if (static_cast<long>(f.size()) != n1 * n2) {
    throw Error(ErrorKind::DimensionMismatch, "contour field does not match the grid");
  }
  auto value = [&](long i, long j) { return f[i * n2 + j]; };
  // Edge keys: 2*(i*n2+j) runs along axis1 from (i,j); +1 runs along axis2.
  auto along1 = [&](long i, long j) { return 2 * (i * n2 + j); };
  auto along2 = [&](long i, long j) { return 2 * (i * n2 + j) + 1; };
  auto point = [&](long key) {
    const long node = key / 2;
    const long i = node / n2, j = node % n2;
    const long i1 = (key % 2 == 0) ? i + 1 : i;
    const long j1 = (key % 2 == 0) ? j : j + 1;
    const double fa = value(i, j), fb = value(i1, j1);
    const double t = fa / (fa - fb);
    return BoundaryPoint{x1[i] + t * (x1[i1] - x1[i]), x2[j] + t * (x2[j1] - x2[j])};
  };

  std::map<long, std::vector<long>> adjacency;
  auto link = [&](long a, long b) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  };
  for (long i = 0; i + 1 < n1; ++i) {
    for (long j = 0; j + 1 < n2; ++j) {
      const double f00 = value(i, j), f10 = value(i + 1, j);
      const double f11 = value(i + 1, j + 1), f01 = value(i, j + 1);
      if (std::isnan(f00) || std::isnan(f10) || std::isnan(f11) || std::isnan(f01)) continue;
      const bool b00 = f00 > 0, b10 = f10 > 0, b11 = f11 > 0, b01 = f01 > 0;
      const long e0 = along1(i, j), e1 = along2(i + 1, j);
      const long e2 = along1(i, j + 1), e3 = along2(i, j);
      std::vector<long> cut;
      if (b00 != b10) cut.push_back(e0);
      if (b10 != b11) cut.push_back(e1);
      if (b01 != b11) cut.push_back(e2);
      if (b00 != b01) cut.push_back(e3);
      if (cut.size() == 2) {
        link(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        const bool centre = 0.25 * (f00 + f10 + f11 + f01) > 0;
        if (centre == b00) {
          link(e0, e1);
          link(e2, e3);
        } else {
          link(e0, e3);
          link(e1, e2);
        }
      }
    }
  }

  std::vector<Polyline> lines;
  std::map<long, bool> used;
  auto walk = [&](long start) {
    Polyline line{point(start)};
    used[start] = true;
    long cur = start;
    while (true) {
      long nxt = -1;
      for (long cand : adjacency[cur]) {
        if (!used[cand]) {
          nxt = cand;
          break;
        }
      }
      if (nxt < 0) {
        // Close a loop back to its start.
        const auto& adj = adjacency[cur];
        if (line.size() > 2 && std::find(adj.begin(), adj.end(), start) != adj.end()) {
          line.push_back(point(start));
        }
        break;
      }
      used[nxt] = true;
      line.push_back(point(nxt));
      cur = nxt;
    }
    lines.push_back(std::move(line));
  };
  for (const auto& [key, adj] : adjacency) {
    if (adj.size() == 1 && !used[key]) walk(key);
  }
  for (const auto& [key, adj] : adjacency) {
    if (!used[key]) walk(key);
  }
  return lines;
}

Boundaries extract_boundary(const PhaseTable& table, double epsilon) {
  if (table.axis2_values.empty()) {
    throw Error(ErrorKind::InvalidInput, "extract_boundary needs a two-dimensional table");
  }
  const std::size_t n = table.rows.size();
  if (n != table.axis1_values.size() * table.axis2_values.size()) {
    throw Error(ErrorKind::InvalidInput, "phase table is incomplete");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> crystal(n), oscillating(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = table.rows[k];
    crystal[k] = r.kind ? r.delta_n - epsilon : nan;
    oscillating[k] = r.kind ? (*r.kind == PhaseKind::Oscillating ? 0.5 : -0.5) : nan;
  }
  return {contour_zero(crystal, table.axis1_values, table.axis2_values),
          contour_zero(oscillating, table.axis1_values, table.axis2_values)};
}

std::optional<TransitionBracket> bisect_transition(const SweepSpec& spec, double lo, double hi,
                                                   double tol) {
  auto probe = [&](double v) { return evaluate_node(spec, v, std::nullopt); };
  auto crystal = [](const PhaseRow& row) { return *row.kind == PhaseKind::Crystal; };
  const PhaseRow at_lo = probe(lo), at_hi = probe(hi);
  for (const PhaseRow* row : {&at_lo, &at_hi}) {
    if (!row->kind) throw Error(ErrorKind::Inconclusive, "bisection end point failed: " + row->detail);
  }
  if (crystal(at_lo) || !crystal(at_hi)) return std::nullopt;
  TransitionBracket b{lo, hi};
  while (b.width() > tol) {
    const double mid = b.midpoint();
    const PhaseRow row = probe(mid);
    if (!row.kind) break;
    (crystal(row) ? b.hi : b.lo) = mid;
  }
  return b;
}

}  // namespace cavarray
