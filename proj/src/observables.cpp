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

#include "cavarray/observables.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "cavarray/error.hpp"

namespace cavarray {

StateDiagnostics diagnose(const DensityMatrix& rho) {
  StateDiagnostics d;
  d.trace_deviation = std::abs(rho.trace() - 1.0);
  d.hermiticity_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

Complex expectation(const Operator& op, const DensityMatrix& rho) {
  if (op.rows() != rho.rows() || op.cols() != rho.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "expectation: shape mismatch");
  }
  // tr(op rho) without forming the product.
  return (op.transpose().cwiseProduct(rho)).sum();
}

MeanFields single_site_fields(const DensityMatrix& rho) {
  const int d = int(rho.rows());
  MeanFields f;
  double n = 0.0;
  for (int k = 0; k < d; ++k) {
    n += k * rho(k, k).real();
    if (k + 1 < d) {
      const double s = std::sqrt(double(k + 1));
      f.a += s * rho(k + 1, k);
      f.adag_adag_a += double(k) * s * rho(k, k + 1);
    }
    if (k + 2 < d) f.a_a += std::sqrt(double((k + 1) * (k + 2))) * rho(k + 2, k);
  }
  f.n = n;
  return f;
}

SublatticeFields mf_expectations(const MeanFieldState& state) {
  return {single_site_fields(state.rho_A), single_site_fields(state.rho_B)};
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw Error(ErrorKind::InvalidInput, "linspace needs count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo + step * i;
  return out;
}

WignerGrid wigner(const DensityMatrix& rho, const std::vector<double>& xs,
                  const std::vector<double>& ps) {
  if (xs.empty() || ps.empty()) throw Error(ErrorKind::InvalidInput, "empty Wigner grid");
  const int d = int(rho.rows());
  WignerGrid grid;
  grid.xs = xs;
  grid.ps = ps;
  grid.values.resize(Eigen::Index(xs.size()), Eigen::Index(ps.size()));

  // half_log_ratio(n, k) = 0.5 * log(n! / (n+k)!)
  Eigen::MatrixXd half_log_ratio(d, d);
  for (int n = 0; n < d; ++n) {
    for (int k = 0; n + k < d; ++k) {
      half_log_ratio(n, k) = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + k + 1.0));
    }
  }

  std::vector<double> lag(d);
  for (std::size_t ix = 0; ix < xs.size(); ++ix) {
    for (std::size_t ip = 0; ip < ps.size(); ++ip) {
      const Complex alpha = Complex(xs[ix], ps[ip]) / std::numbers::sqrt2;
      const double r2 = 4.0 * std::norm(alpha);
      const double gauss = std::exp(-0.5 * r2);
      const Complex two_alpha_conj = 2.0 * std::conj(alpha);
      Complex total = 0.0;
      Complex power = 1.0;  // (2 alpha^*)^k
      for (int k = 0; k < d; ++k) {
        // Generalized Laguerre L_n^(k)(r2) for n = 0 .. d-1-k by recurrence.
        const int top = d - k;
        lag[0] = 1.0;
        if (top > 1) lag[1] = 1.0 + k - r2;
        for (int n = 1; n + 1 < top; ++n) {
          lag[n + 1] = ((2.0 * n + 1.0 + k - r2) * lag[n] - (n + k) * lag[n - 1]) / (n + 1.0);
        }
        for (int n = 0; n < top; ++n) {
          const double sign = (n % 2 == 0) ? 1.0 : -1.0;
          const Complex kernel =
              sign * std::exp(half_log_ratio(n, k)) * power * lag[n];
          total += rho(n + k, n) * kernel;
          if (k > 0) total += rho(n, n + k) * std::conj(kernel);
        }
        power *= two_alpha_conj;
      }
      total *= gauss / std::numbers::pi;
      grid.values(Eigen::Index(ix), Eigen::Index(ip)) = total.real();
      grid.max_imag_residue = std::max(grid.max_imag_residue, std::abs(total.imag()));
    }
  }
  return grid;
}

double WignerGrid::integral() const {
  const double dx = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
  const double dp = ps.size() > 1 ? ps[1] - ps[0] : 1.0;
  return values.sum() * dx * dp;
}

void write_csv(std::ostream& out, const WignerGrid& grid) {
  out << "x,p,W\n";
  out.precision(10);
  for (std::size_t i = 0; i < grid.xs.size(); ++i) {
    for (std::size_t j = 0; j < grid.ps.size(); ++j) {
      out << grid.xs[i] << ',' << grid.ps[j] << ','
          << grid.values(Eigen::Index(i), Eigen::Index(j)) << '\n';
    }
  }
}

}  // namespace cavarray
