#include "gbvar/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "gbvar/error.hpp"

namespace gbvar {

BinaryPanel BinaryPanel::slice(std::size_t first, std::size_t count) const {
  BinaryPanel out(count, d);
  std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(first * d), count * d, out.data.begin());
  out.labels = labels;
  return out;
}

BinaryPanel BinaryPanel::leading_columns(std::size_t cols) const {
  BinaryPanel out(n, cols);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < cols; ++k) out(t, k) = (*this)(t, k);
  if (!labels.empty()) out.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(cols));
  return out;
}

Matrix BinaryPanel::as_matrix() const {
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < d; ++k) out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = (*this)(t, k);
  return out;
}

std::vector<std::string> BinaryPanel::column_labels() const {
  if (labels.size() == d) return labels;
  std::vector<std::string> out;
  out.reserve(d);
  for (std::size_t k = 0; k < d; ++k) out.push_back("x" + std::to_string(k + 1));
  return out;
}

CoefficientDraw::Matrices CoefficientDraw::realize(const GbvarParams& params) const {
  const Eigen::Index d = params.d;
  Matrices out;
  for (int q = 0; q < params.p; ++q) {
    out.a.push_back(Matrix::Zero(d, d));
    out.a_plus.push_back(Matrix::Zero(d, d));
    out.a_minus.push_back(Matrix::Zero(d, d));
  }
  out.b = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const int slot = slots[static_cast<std::size_t>(k)];
    if (slot >= params.p * d) {
      out.b(k, k) = 1.0;
      continue;
    }
    const int q = static_cast<int>(slot / d);
    const Eigen::Index l = slot % d;
    const bool negative = params.coef[q](k, l) < 0.0;
    out.a[q](k, l) = 1.0;
    out.a_plus[q](k, l) = negative ? -1.0 : 1.0;
    out.a_minus[q](k, l) = negative ? 1.0 : 0.0;
  }
  return out;
}

int draw_row_coefficient(const CounterpartParams& cp, Eigen::Index row, double u) {
  const auto cum = cp.cumulative.row(row);
  const Eigen::Index width = cum.size();
  // First slot whose running sum exceeds u; zero-mass slots are skipped.
  Eigen::Index lo = 0;
  Eigen::Index hi = width - 1;
  while (lo < hi) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (cum[mid] > u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return static_cast<int>(lo);
}

int draw_row_coefficient(const CounterpartParams& cp, Eigen::Index row, CounterRng& rng) {
  return draw_row_coefficient(cp, row, rng.next_uniform());
}

CoefficientDraw draw_coefficients(const CounterpartParams& cp, const CounterRng& step_stream) {
  CoefficientDraw draw;
  const Eigen::Index d = cp.row_probs.rows();
  draw.slots.resize(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k)
    draw.slots[static_cast<std::size_t>(k)] =
        draw_row_coefficient(cp, k, step_stream.uniform_at(2 * static_cast<std::uint64_t>(k)));
  return draw;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

Matrix copula_factor_for(const SimConfig& config, int d) {
  const Matrix& r = config.correlation;
  if (r.rows() != d || r.cols() != d) throw ShapeMismatch("copula correlation must be d x d");
  for (int i = 0; i < d; ++i)
    if (std::abs(r(i, i) - 1.0) > 1e-12) throw InvalidArgument("copula correlation needs a unit diagonal");
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidArgument("copula correlation must be symmetric");
  // LDLT tolerates singular PSD matrices (e.g. perfectly correlated pairs).
  Eigen::LDLT<Matrix> ldlt(r);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < -1e-12).any())
    throw InvalidArgument("copula correlation is not positive semidefinite");
  const Vector root_d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Matrix lower = ldlt.matrixL();
  Matrix factor = ldlt.transpositionsP().transpose() * (lower * root_d.asDiagonal());
  return factor;
}

}  // namespace

State draw_innovations(const Vector& mu_e, const CounterRng& step_stream, const Matrix* copula_factor) {
  const Eigen::Index d = mu_e.size();
  State e(static_cast<std::size_t>(d));
  if (copula_factor == nullptr) {
    for (Eigen::Index k = 0; k < d; ++k)
      e[static_cast<std::size_t>(k)] = step_stream.uniform_at(2 * static_cast<std::uint64_t>(k) + 1) < mu_e[k];
    return e;
  }
  CounterRng normals = step_stream.substream(1);
  Vector z(d);
  for (Eigen::Index k = 0; k < d; ++k) z[k] = normals.next_normal();
  const Vector correlated = (*copula_factor) * z;
  for (Eigen::Index k = 0; k < d; ++k) e[static_cast<std::size_t>(k)] = normal_cdf(correlated[k]) < mu_e[k];
  return e;
}

State apply_step(const GbvarParams& params, const CoefficientDraw& draw, std::span<const State> lags,
                 std::span<const std::uint8_t> innovations) {
  const int d = params.d;
  State next(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const int slot = draw.slots[static_cast<std::size_t>(k)];
    if (slot >= params.p * d) {
      next[static_cast<std::size_t>(k)] = innovations[static_cast<std::size_t>(k)];
      continue;
    }
    const int q = slot / d;
    const int l = slot % d;
    const std::uint8_t lagged = lags[static_cast<std::size_t>(q)][static_cast<std::size_t>(l)];
    next[static_cast<std::size_t>(k)] = params.coef[q](k, l) < 0.0 ? std::uint8_t(1 - lagged) : lagged;
  }
  return next;
}

State step(const GbvarParams& params, const CounterpartParams& cp, std::span<const State> lags,
           const CounterRng& step_stream, const Matrix* copula_factor) {
  const CoefficientDraw draw = draw_coefficients(cp, step_stream);
  const State e = draw_innovations(params.mu_e, step_stream, copula_factor);
  return apply_step(params, draw, lags, e);
}

namespace {

std::vector<State> initial_lags(const GbvarParams& params, std::uint64_t seed) {
  const CounterRng init(CounterRng::derive_key(seed, 0));
  std::vector<State> lags(static_cast<std::size_t>(params.p), State(static_cast<std::size_t>(params.d)));
  for (int q = 0; q < params.p; ++q)
    for (int k = 0; k < params.d; ++k)
      lags[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] =
          init.uniform_at(static_cast<std::uint64_t>(q) * static_cast<std::uint64_t>(params.d) +
                          static_cast<std::uint64_t>(k)) < params.mu_e[k];
  return lags;
}

void warn_if_nonstationary(const GbvarParams& params) {
  const auto report = stationarity_diagnostics(params);
  if (!report.is_stationary)
    std::clog << "warning: parameters fail the stationarity diagnostic (max row sum "
              << report.max_rowsum << ", spectral radius " << report.spectral_radius << ")\n";
}

}  // namespace

BinaryPanel simulate(const GbvarParams& params, const SimConfig& config) {
  warn_if_nonstationary(params);
  const CounterpartParams cp = counterpart(params);
  Matrix factor;
  const Matrix* factor_ptr = nullptr;
  if (config.innovation == InnovationMode::gaussian_copula) {
    factor = copula_factor_for(config, params.d);
    factor_ptr = &factor;
  }

  BinaryPanel panel(config.n, static_cast<std::size_t>(params.d));
  std::vector<State> lags = initial_lags(params, config.seed);
  const std::size_t total = config.burn_in + config.n;
  for (std::size_t t = 0; t < total; ++t) {
    const CounterRng stream(CounterRng::derive_key(config.seed, t + 1));
    State next = step(params, cp, lags, stream, factor_ptr);
    if (t >= config.burn_in)
      std::copy(next.begin(), next.end(), panel.data.begin() + static_cast<std::ptrdiff_t>((t - config.burn_in) * panel.d));
    std::rotate(lags.rbegin(), lags.rbegin() + 1, lags.rend());
    lags.front() = std::move(next);
  }
  return panel;
}

BinaryPanel simulate_stacked(const CompanionForm& companion, const SimConfig& config) {
  const GbvarParams& base = companion.base;
  warn_if_nonstationary(base);
  const int d = base.d;
  const int dim = companion.dim();
  // The stochastic rows are a gbVAR(1) on the stacked state: row k draws one
  // of dim lag slots (mass |coef(k, l)|) or its innovation (mass beta_k).
  Matrix cumulative(d, dim + 1);
  for (int k = 0; k < d; ++k) {
    double running = 0.0;
    for (int l = 0; l < dim; ++l) {
      running += std::abs(companion.coef(k, l));
      cumulative(k, l) = running;
    }
    cumulative(k, dim) = 1.0;
  }
  Matrix factor;
  const Matrix* factor_ptr = nullptr;
  if (config.innovation == InnovationMode::gaussian_copula) {
    factor = copula_factor_for(config, d);
    factor_ptr = &factor;
  }

  const std::vector<State> lags = initial_lags(base, config.seed);
  State z(static_cast<std::size_t>(dim));
  for (int q = 0; q < base.p; ++q)
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(q * d + k)] = lags[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];

  BinaryPanel panel(config.n, static_cast<std::size_t>(dim));
  const std::size_t total = config.burn_in + config.n;
  State next(static_cast<std::size_t>(dim));
  for (std::size_t t = 0; t < total; ++t) {
    const CounterRng stream(CounterRng::derive_key(config.seed, t + 1));
    const State e = draw_innovations(base.mu_e, stream, factor_ptr);
    for (int k = 0; k < d; ++k) {
      const double u = stream.uniform_at(2 * static_cast<std::uint64_t>(k));
      int slot = 0;
      while (slot < dim && !(cumulative(k, slot) > u)) ++slot;
      if (slot == dim) {
        next[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(k)];
      } else {
        const std::uint8_t v = z[static_cast<std::size_t>(slot)];
        next[static_cast<std::size_t>(k)] = companion.coef(k, slot) < 0.0 ? std::uint8_t(1 - v) : v;
      }
    }
    // Shift block: Z_t[d..] = Z_{t-1}[..dim-d].
    for (int j = d; j < dim; ++j) next[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j - d)];
    z = next;
    if (t >= config.burn_in)
      std::copy(z.begin(), z.end(), panel.data.begin() + static_cast<std::ptrdiff_t>((t - config.burn_in) * panel.d));
  }
  return panel;
}

namespace {

GbvarParams from_structure(const Matrix& a, double mu) {
  const Eigen::Index d = a.rows();
  Vector beta(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    // Entries are multiples of 0.3; count them to get beta in tenths exactly.
    const auto count = (a.row(k).array() != 0.0).count();
    beta[k] = static_cast<double>(10 - 3 * count) / 10.0;
  }
  return make_params(a, beta, Vector::Constant(d, mu));
}

Matrix tridiagonal_without_diagonal(int d) {
  Matrix a = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (i > 0) a(i, i - 1) = 0.3;
    if (i + 1 < d) a(i, i + 1) = 0.3;
  }
  return a;
}

}  // namespace

GbvarParams dgp_preset(std::string_view name, int d) {
  if (name == "example1") {
    if (d != 0 && d != 3) throw InvalidArgument("example1 has fixed dimension 3");
    Matrix a(3, 3);
    a << 0.15, -0.25, 0.49, -0.19, 0.27, 0.28, 0.17, -0.37, 0.21;
    // The third row as printed sums to 0.98; beta_3 takes up the slack.
    return make_params(a, Vector{{0.11, 0.26, 0.25}}, Vector{{0.48, 0.52, 0.47}});
  }
  const bool graph = name == "random-graph";
  if (name != "dgp1" && name != "dgp2" && name != "dgp3" && !graph) throw UnknownPreset(std::string(name));
  if (d == 0) d = graph ? 45 : 80;
  if (d < 3) throw InvalidArgument("DGP presets need d >= 3");

  if (name == "dgp1" || graph) return from_structure(tridiagonal_without_diagonal(d), 0.5);
  Matrix a = Matrix::Zero(d, d);
  if (name == "dgp2") {
    // 1-based (i, i) and (i, d - i); out-of-range or coinciding cells count once.
    for (int i = 1; i <= d; ++i) {
      a(i - 1, i - 1) = 0.3;
      if (d - i >= 1) a(i - 1, d - i - 1) = 0.3;
    }
  } else {
    // Column mirror of dgp1: 1-based columns d - i and d - i + 2.
    const Matrix tri = tridiagonal_without_diagonal(d);
    a = tri.rowwise().reverse();
  }
  return from_structure(a, 0.5);
}

}  // namespace gbvar
