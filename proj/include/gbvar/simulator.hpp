#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbvar/model.hpp"
#include "gbvar/rng.hpp"
#include "gbvar/types.hpp"

namespace gbvar {

/// n x d panel of {0,1} observations, stored row-major.
struct BinaryPanel {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::uint8_t> data;
  std::vector<std::string> labels;  // empty or length d

  BinaryPanel() = default;
  BinaryPanel(std::size_t rows, std::size_t cols) : n(rows), d(cols), data(rows * cols, 0) {}

  std::uint8_t operator()(std::size_t t, std::size_t k) const { return data[t * d + k]; }
  std::uint8_t& operator()(std::size_t t, std::size_t k) { return data[t * d + k]; }

  std::span<const std::uint8_t> row(std::size_t t) const { return {data.data() + t * d, d}; }

  /// Rows [first, first + count) as a new panel (labels kept).
  BinaryPanel slice(std::size_t first, std::size_t count) const;
  /// Columns [0, cols) as a new panel.
  BinaryPanel leading_columns(std::size_t cols) const;
  Matrix as_matrix() const;
  /// Column labels, generating "x1".."xd" when none are stored.
  std::vector<std::string> column_labels() const;
};

using State = std::vector<std::uint8_t>;

/// One multinomial draw per row: slot in [0, d(p+1)). Slot q*d + l means
/// lag q+1, column l; slot p*d + k is the innovation (B) outcome of row k.
struct CoefficientDraw {
  std::vector<int> slots;

  /// Realized A_t^(q) (0/1 selection), B_t, and the signed splits
  /// A_t^(+,q) (entry +1 / -1 by sign of alpha) and A_t^(-,q).
  struct Matrices {
    std::vector<Matrix> a;
    std::vector<Matrix> a_plus;
    std::vector<Matrix> a_minus;
    Matrix b;
  };
  Matrices realize(const GbvarParams& params) const;
};

enum class InnovationMode { independent, gaussian_copula };

struct SimConfig {
  std::size_t n = 0;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
  InnovationMode innovation = InnovationMode::independent;
  Matrix correlation;  // used by gaussian_copula; unit diagonal, PSD
};

/// Inverse-CDF multinomial draw for one row given a uniform u in [0,1).
int draw_row_coefficient(const CounterpartParams& cp, Eigen::Index row, double u);
int draw_row_coefficient(const CounterpartParams& cp, Eigen::Index row, CounterRng& rng);

/// Per-step randomness is a single stream: row k reads uniform 2k for its
/// multinomial slot and 2k+1 for its innovation. Copula normals come from
/// substream 1 of the step stream.
CoefficientDraw draw_coefficients(const CounterpartParams& cp, const CounterRng& step_stream);
State draw_innovations(const Vector& mu_e, const CounterRng& step_stream,
                       const Matrix* copula_factor = nullptr);

/// Deterministic recursion for given draws. lags[0] is X_{t-1}.
State apply_step(const GbvarParams& params, const CoefficientDraw& draw,
                 std::span<const State> lags, std::span<const std::uint8_t> innovations);

State step(const GbvarParams& params, const CounterpartParams& cp, std::span<const State> lags,
           const CounterRng& step_stream, const Matrix* copula_factor = nullptr);

/// Forward simulation with burn-in. Step t (counting burn-in, from 0) uses
/// stream derive_key(seed, t + 1); the initial lags use derive_key(seed, 0).
BinaryPanel simulate(const GbvarParams& params, const SimConfig& config);

/// Same law through the companion form: returns the n x pd stacked panel
/// whose first d columns are X_t. Uses the same stream layout as `simulate`.
BinaryPanel simulate_stacked(const CompanionForm& companion, const SimConfig& config);

/// Named parameter sets: dgp1 | dgp2 | dgp3 | example1 | random-graph.
/// d = 0 selects the preset's default dimension (80, or 3 / 45).
GbvarParams dgp_preset(std::string_view name, int d = 0);

}  // namespace gbvar
