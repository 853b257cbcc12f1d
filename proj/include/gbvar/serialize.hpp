#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>

#include "gbvar/bootstrap.hpp"
#include "gbvar/model.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/sparse.hpp"
#include "gbvar/tuning.hpp"

namespace gbvar {

using Json = nlohmann::ordered_json;

/// Matrices are arrays of rows. Readers accept numbers or decimal strings
/// for every real; writers emit 17-significant-digit strings when
/// `string_reals` is set.
Json matrix_to_json(const Matrix& m, bool string_reals = false);
Matrix matrix_from_json(const Json& j, const char* field);

/// {p, d, coef: [matrix, ...], beta, mu_e}; validated on read.
Json params_to_json(const GbvarParams& params, bool string_reals = false);
GbvarParams params_from_json(const Json& j);

/// {n, mean, sigma0, sigma1}
Json moments_to_json(const LagCovariances& cov);
LagCovariances moments_from_json(const Json& j);

/// {d, lambda, threshold, max_iter, tol, lasso_converged, supports (0-based),
///  lasso, estimate}
Json fit_to_json(const PostSelectionFit& fit);
PostSelectionFit fit_from_json(const Json& j);

/// {B, alpha, h_n, kernel, critical_value, ci_halfwidth, n, seed, jitter, psi_stars}
Json bootstrap_to_json(const BootstrapResult& result);
BootstrapResult bootstrap_from_json(const Json& j);

/// CSV rows "i,j,lower,upper,selected" (0-based indices).
void write_region_csv(const ConfidenceRegion& region, std::ostream& out);

/// CSV rows "lambda,b_d,tau1,tau2".
void write_score_table_csv(const TuneResult& result, std::ostream& out);

/// Shortest decimal text that parses back to the same double (at most 17 digits).
std::string format_real(double v);

Json load_json(const std::filesystem::path& path);
void save_json(const Json& j, const std::filesystem::path& path);

}  // namespace gbvar
