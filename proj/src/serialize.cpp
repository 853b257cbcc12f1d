#include "gbvar/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <string>

#include "gbvar/error.hpp"

namespace gbvar {

std::string format_real(double v) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, res.ptr);
}

namespace {

double real_from_json(const Json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
  }
  throw FormatError(std::string("field '") + field + "' holds a non-numeric value");
}

Json real_to_json(double v, bool string_reals) { return string_reals ? Json(format_real(v)) : Json(v); }

const Json& require(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) throw FormatError(std::string("missing field '") + field + "'");
  return j.at(field);
}

Vector vector_from_json(const Json& j, const char* field) {
  if (!j.is_array()) throw FormatError(std::string("field '") + field + "' must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = real_from_json(j[k], field);
  return v;
}

Json vector_to_json(const Vector& v, bool string_reals = false) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(real_to_json(v[k], string_reals));
  return out;
}

}  // namespace

Json matrix_to_json(const Matrix& m, bool string_reals) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(real_to_json(m(r, c), string_reals));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const Json& j, const char* field) {
  if (!j.is_array()) throw FormatError(std::string("field '") + field + "' must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw FormatError(std::string("field '") + field + "' must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw FormatError(std::string("field '") + field + "' has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = real_from_json(row[static_cast<std::size_t>(c)], field);
  }
  return m;
}

Json params_to_json(const GbvarParams& params, bool string_reals) {
  Json out;
  out["p"] = params.p;
  out["d"] = params.d;
  Json coef = Json::array();
  for (const auto& m : params.coef) coef.push_back(matrix_to_json(m, string_reals));
  out["coef"] = std::move(coef);
  out["beta"] = vector_to_json(params.beta, string_reals);
  out["mu_e"] = vector_to_json(params.mu_e, string_reals);
  return out;
}

GbvarParams params_from_json(const Json& j) {
  GbvarParams params;
  params.p = require(j, "p").get<int>();
  params.d = require(j, "d").get<int>();
  const Json& coef = require(j, "coef");
  if (!coef.is_array()) throw FormatError("field 'coef' must be an array of matrices");
  for (const Json& m : coef) {
    // A flat row-major array is accepted as well as an array of rows.
    if (m.is_array() && !m.empty() && !m[0].is_array()) {
      const Vector flat = vector_from_json(m, "coef");
      if (flat.size() != static_cast<Eigen::Index>(params.d) * params.d)
        throw ShapeMismatch("flat coefficient matrix must have d*d entries");
      params.coef.push_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          flat.data(), params.d, params.d));
    } else {
      params.coef.push_back(matrix_from_json(m, "coef"));
    }
  }
  params.beta = vector_from_json(require(j, "beta"), "beta");
  params.mu_e = vector_from_json(require(j, "mu_e"), "mu_e");
  return validate_params(std::move(params));
}

Json moments_to_json(const LagCovariances& cov) {
  Json out;
  out["n"] = cov.n;
  out["mean"] = vector_to_json(cov.mean);
  out["sigma0"] = matrix_to_json(cov.sigma0);
  out["sigma1"] = matrix_to_json(cov.sigma1);
  return out;
}

LagCovariances moments_from_json(const Json& j) {
  LagCovariances cov;
  cov.n = require(j, "n").get<std::size_t>();
  cov.mean = vector_from_json(require(j, "mean"), "mean");
  cov.sigma0 = matrix_from_json(require(j, "sigma0"), "sigma0");
  cov.sigma1 = matrix_from_json(require(j, "sigma1"), "sigma1");
  const Eigen::Index d = cov.mean.size();
  if (cov.sigma0.rows() != d || cov.sigma0.cols() != d || cov.sigma1.rows() != d || cov.sigma1.cols() != d)
    throw ShapeMismatch("moment matrices must be d x d");
  return cov;
}

Json fit_to_json(const PostSelectionFit& fit) {
  Json out;
  out["d"] = fit.dim();
  out["lambda"] = fit.lasso_config.lambda;
  out["threshold"] = fit.threshold;
  out["max_iter"] = fit.lasso_config.max_iter;
  out["tol"] = fit.lasso_config.tol;
  out["lasso_converged"] = fit.lasso_converged;
  out["index_base"] = 0;
  Json supports = Json::array();
  for (const auto& s : fit.supports) supports.push_back(s);
  out["supports"] = std::move(supports);
  out["lasso"] = matrix_to_json(fit.lasso);
  out["estimate"] = matrix_to_json(fit.estimate);
  return out;
}

PostSelectionFit fit_from_json(const Json& j) {
  PostSelectionFit fit;
  const auto d = require(j, "d").get<Eigen::Index>();
  fit.lasso_config.lambda = real_from_json(require(j, "lambda"), "lambda");
  fit.threshold = real_from_json(require(j, "threshold"), "threshold");
  if (j.contains("max_iter")) fit.lasso_config.max_iter = j.at("max_iter").get<int>();
  if (j.contains("tol")) fit.lasso_config.tol = real_from_json(j.at("tol"), "tol");
  if (j.contains("lasso_converged")) fit.lasso_converged = j.at("lasso_converged").get<bool>();
  fit.lasso = matrix_from_json(require(j, "lasso"), "lasso");
  fit.estimate = matrix_from_json(require(j, "estimate"), "estimate");
  if (fit.lasso.rows() != d || fit.lasso.cols() != d || fit.estimate.rows() != d || fit.estimate.cols() != d)
    throw ShapeMismatch("fit matrices must be d x d");
  const Json& supports = require(j, "supports");
  if (!supports.is_array() || static_cast<Eigen::Index>(supports.size()) != d)
    throw FormatError("field 'supports' must hold d index arrays");
  for (const Json& s : supports) {
    IndexSet set = s.get<IndexSet>();
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (set[k] < 0 || set[k] >= d) throw FormatError("support index out of range");
      if (k > 0 && set[k] <= set[k - 1]) throw FormatError("supports must be sorted and distinct");
    }
    fit.supports.push_back(std::move(set));
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const IndexSet& s = fit.supports[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < d; ++c)
      if (fit.estimate(i, c) != 0.0 && !std::binary_search(s.begin(), s.end(), static_cast<int>(c)))
        throw FormatError("estimate is nonzero outside the support");
  }
  return fit;
}

Json bootstrap_to_json(const BootstrapResult& result) {
  Json out;
  out["B"] = result.replicates;
  out["alpha"] = result.alpha;
  out["h_n"] = result.bandwidth;
  out["kernel"] = result.kernel;
  out["critical_value"] = result.critical_value;
  out["ci_halfwidth"] = result.ci_halfwidth;
  out["n"] = result.n;
  out["seed"] = result.seed;
  out["jitter"] = result.jitter;
  out["psi_stars"] = result.psi_stars;
  return out;
}

BootstrapResult bootstrap_from_json(const Json& j) {
  BootstrapResult result;
  result.replicates = require(j, "B").get<int>();
  result.alpha = real_from_json(require(j, "alpha"), "alpha");
  result.bandwidth = real_from_json(require(j, "h_n"), "h_n");
  result.kernel = require(j, "kernel").get<std::string>();
  result.critical_value = real_from_json(require(j, "critical_value"), "critical_value");
  result.ci_halfwidth = real_from_json(require(j, "ci_halfwidth"), "ci_halfwidth");
  result.psi_stars = require(j, "psi_stars").get<std::vector<double>>();
  if (j.contains("n")) result.n = j.at("n").get<std::size_t>();
  if (j.contains("seed")) result.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("jitter")) result.jitter = real_from_json(j.at("jitter"), "jitter");
  return result;
}

void write_region_csv(const ConfidenceRegion& region, std::ostream& out) {
  out << "i,j,lower,upper,selected\n";
  for (Eigen::Index i = 0; i < region.lower.rows(); ++i)
    for (Eigen::Index j = 0; j < region.lower.cols(); ++j)
      out << i << ',' << j << ',' << format_real(region.lower(i, j)) << ',' << format_real(region.upper(i, j)) << ','
          << (region.selected(i, j) ? 1 : 0) << '\n';
}

void write_score_table_csv(const TuneResult& result, std::ostream& out) {
  out << "lambda,b_d,tau1,tau2\n";
  for (const TuneScore& s : result.table)
    out << format_real(s.lambda) << ',' << format_real(s.threshold) << ',' << format_real(s.tau1) << ','
        << format_real(s.tau2) << '\n';
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace gbvar
