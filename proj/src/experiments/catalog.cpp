// The six experiment definitions: parameters, per-replicate work, summaries.

#include <cmath>
#include <limits>
#include <map>

#include "hollowpca/estimators.hpp"
#include "hollowpca/experiments/harness.hpp"
#include "hollowpca/metrics.hpp"
#include "hollowpca/models.hpp"

namespace hollowpca::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void need(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

double log_n(Index n) { return std::log(static_cast<double>(n)); }

// ||mu||^2 solving ||mu||^4 / (||mu||^2 + d/n) = snr.
double gmm_mu2(double snr, Index d, Index n) {
  const double ratio = static_cast<double>(d) / static_cast<double>(n);
  return 0.5 * (snr + std::sqrt(snr * snr + 4.0 * snr * ratio));
}

EigenSolver solver_of(const GridPoint& p) {
  return p.option("eigensolver") == "krylov" ? EigenSolver::Krylov : EigenSolver::Dense;
}

LabelVector half_split(Index n) {
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = 2 * i < n ? 1 : -1;
  return LabelVector::binary(std::move(y));
}

LabelVector balanced_blocks(Index n, Index k) {
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = static_cast<int>(i * k / n) + 1;
  return LabelVector::multiclass(std::move(y), static_cast<int>(k));
}

// Unit-scale centers for the mixture geometries; second value is rank(B).
std::pair<RowMatrix, Index> geometry(const std::string& name, Index d) {
  if (name == "antipodal") {
    RowMatrix c = RowMatrix::Zero(2, d);
    c(0, 0) = 1.0;
    c(1, 0) = -1.0;
    return {c, 1};
  }
  RowMatrix c = RowMatrix::Zero(3, d);
  if (name == "identity") {
    for (Index k = 0; k < 3; ++k) c(k, k) = 1.0;
    return {c, 3};
  }
  c(0, 0) = 1.0;
  c(1, 0) = -0.5;
  c(1, 1) = std::sqrt(3.0) / 2.0;
  c(2, 0) = -0.5;
  c(2, 1) = -std::sqrt(3.0) / 2.0;
  return {c, 2};
}

// Scales unit centers so that the mixture SNR with noise (op, hs) equals `snr`.
RowMatrix scaled_centers(const RowMatrix& unit, double snr, const NoiseScale& noise, Index n) {
  const double s_unit = min_center_separation(unit);
  const double hs2 = noise.hs * noise.hs;
  const double s2 = std::max(snr * noise.op, std::sqrt(snr * hs2 / static_cast<double>(n)));
  return unit * (std::sqrt(s2) / s_unit);
}

Vector unit_e1(Index d, double norm) {
  Vector mu = Vector::Zero(d);
  mu(0) = norm;
  return mu;
}

double as_flag(bool b) { return b ? 1.0 : 0.0; }

// Groups grid points that agree on every parameter except `axis`.
std::map<std::vector<double>, std::vector<Index>> groups_without(const ExperimentResult& r, const std::string& axis) {
  std::map<std::vector<double>, std::vector<Index>> out;
  for (const auto& p : r.points) {
    std::vector<double> key;
    for (const auto& [name, v] : p.values)
      if (name != axis) key.push_back(v);
    out[key].push_back(p.index);
  }
  return out;
}

json point_json(const GridPoint& p) {
  json o = json::object();
  o["grid_index"] = p.index;
  for (const auto& [name, v] : p.values) o[name] = v;
  return o;
}

// ---------------------------------------------------------------- hollowing-demo

ExperimentSpec hollowing_demo() {
  ExperimentSpec s;
  s.kind = ExperimentKind::HollowingDemo;
  s.description = "leading eigenvector of XX^T vs H(XX^T) when one sample has inflated noise";
  s.params = {{"n", 100, "sample size; labels are +1 for the first half"},
              {"d", 500, "dimension"},
              {"mu_norm", 3, "||mu||"},
              {"outlier_variance", 2, "noise variance of sample 1"},
              {"base_variance", 1, "noise variance of the other samples"}};
  s.metrics = {"align_hollowed", "align_unhollowed", "error_hollowed",     "error_unhollowed",
               "lambda1_hollowed", "lambda1_unhollowed", "outlier_weight_unhollowed"};
  s.artifact_columns = {"ubar", "u_unhollowed", "u_hollowed"};
  s.check = [](const GridPoint& p) {
    need(p.count("n") >= 2 && p.count("d") >= 1, "need n >= 2 and d >= 1");
    need(p["mu_norm"] >= 0 && p["outlier_variance"] >= 0 && p["base_variance"] >= 0,
         "mu_norm and variances must be >= 0");
  };
  s.run = [](const GridPoint& p, const Seed& seed, bool artifact) {
    const Index n = p.count("n"), d = p.count("d");
    GmmParams params = GmmParams::symmetric_binary(unit_e1(d, p["mu_norm"]), IsotropicNoise{p["base_variance"]});
    params.labels = half_split(n);
    params.noise_overrides.emplace(0, IsotropicNoise{p["outlier_variance"]});
    const GmmSample sample = sample_gmm(params, n, seed);
    const SymmetricMatrix g = gram(sample.x);
    const auto raw = eigh_window(g, EigenOrdering::DescendingByValue, 0, 1);
    const auto hol = eigh_window(hollow(g), EigenOrdering::DescendingByValue, 0, 1);
    const Vector ubar = sample.labels.as_signs() / std::sqrt(static_cast<double>(n));
    Vector u_raw = raw.vectors.col(0), u_hol = hol.vectors.col(0);
    ReplicateOutput out;
    out.metrics = {std::abs(u_hol.dot(ubar)),
                   std::abs(u_raw.dot(ubar)),
                   misclassification(sign_labels(u_hol), sample.labels),
                   misclassification(sign_labels(u_raw), sample.labels),
                   hol.values(0),
                   raw.values(0),
                   std::abs(u_raw(0))};
    if (artifact) {
      if (u_raw.dot(ubar) < 0) u_raw = -u_raw;
      if (u_hol.dot(ubar) < 0) u_hol = -u_hol;
      out.artifact.resize(n, 3);
      out.artifact << ubar, u_raw, u_hol;
    }
    return out;
  };
  return s;
}

// ---------------------------------------------------------------- CSBM

CsbmParams csbm_params(const GridPoint& p) {
  const Index n = p.count("n");
  need(n >= 2, "need n >= 2");
  return {n, p.count("d"), p["a"], p["b"], p["c"], std::pow(log_n(n), p["q_exponent"])};
}

std::vector<ParamSpec> csbm_param_specs(double n, double d, double q_exponent) {
  return {{"n", n, "number of nodes"},
          {"d", d, "attribute dimension"},
          {"a", 8, "within-block edge scale: alpha = a q / n"},
          {"b", 1, "between-block edge scale: beta = b q / n"},
          {"c", 1.5, "attribute signal: R^4 / (R^2 + d/n) = c q"},
          {"q_exponent", q_exponent, "q = (log n)^q_exponent"}};
}

ExperimentSpec csbm_phase() {
  ExperimentSpec s;
  s.kind = ExperimentKind::CsbmPhase;
  s.description = "exact-recovery frequency of the aggregated graph+attribute estimator over (a, b)";
  s.params = csbm_param_specs(500, 2000, 1.0);
  s.options = {{"estimator", {"aggregated", "modified"}, "which CSBM estimator to score"}};
  s.metrics = {"istar", "q", "exact", "error", "lambda1_graph", "lambda2_graph", "lambda1_gram",
               "weight_graph", "weight_attributes"};
  s.check = [](const GridPoint& p) { csbm_params(p).validate(); };
  s.run = [](const GridPoint& p, const Seed& seed, bool) {
    const CsbmParams params = csbm_params(p);
    const CsbmSample sample = sample_csbm(params, seed);
    const CsbmEstimate est = p.option("estimator") == "modified" ? csbm_modified(sample.adjacency, sample.x)
                                                                 : csbm_aggregated(sample.adjacency, sample.x);
    const double err = misclassification(est.labels, sample.y);
    ReplicateOutput out;
    out.metrics = {istar(params.a, params.b, params.c), params.q, as_flag(err == 0.0), err,
                   est.lambda1_graph, est.lambda2_graph, est.lambda1_gram, est.weight_graph,
                   est.weight_attributes};
    return out;
  };
  s.summarize = [](const ExperimentResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
      json o = point_json(p);
      const auto exact = r.column(p.index, "exact");
      o["istar"] = istar(p["a"], p["b"], p["c"]);
      o["replicates_ok"] = exact.size();
      o["exact_recovery_frequency"] = mean(exact);
      points.push_back(o);
    }
    return json{{"points", points}};
  };
  return s;
}

ExperimentSpec csbm_modified_sparse() {
  ExperimentSpec s;
  s.kind = ExperimentKind::CsbmModifiedSparse;
  s.description = "modified CSBM estimator for sparse graphs, with the aggregated one for contrast";
  s.params = csbm_param_specs(2000, 2000, 0.7);
  s.metrics = {"istar", "q", "error_modified", "exact_modified", "error_aggregated", "exact_aggregated",
               "aggregated_ok", "rate_bound"};
  s.check = [](const GridPoint& p) { csbm_params(p).validate(); };
  s.run = [](const GridPoint& p, const Seed& seed, bool) {
    const CsbmParams params = csbm_params(p);
    const CsbmSample sample = sample_csbm(params, seed);
    const SymmetricMatrix g = hollow(gram(sample.x));
    const CsbmEstimate mod = csbm_modified(sample.adjacency, g, params.d);
    const double err_mod = misclassification(mod.labels, sample.y);
    double err_agg = kNaN, exact_agg = kNaN, agg_ok = 0.0;
    try {
      const CsbmEstimate agg = csbm_aggregated(sample.adjacency, g, params.d);
      err_agg = misclassification(agg.labels, sample.y);
      exact_agg = as_flag(err_agg == 0.0);
      agg_ok = 1.0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateSpectrum && e.kind() != ErrorKind::ConvergenceFailure) throw;
    }
    const double is = istar(params.a, params.b, params.c);
    ReplicateOutput out;
    out.metrics = {is, params.q, err_mod, as_flag(err_mod == 0.0), err_agg, exact_agg, agg_ok,
                   std::exp(-params.q * is / 2.0)};
    return out;
  };
  s.summarize = [](const ExperimentResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
      json o = point_json(p);
      o["mean_error_modified"] = mean(r.column(p.index, "error_modified"));
      o["exact_frequency_modified"] = mean(r.column(p.index, "exact_modified"));
      std::vector<double> agg;
      for (double v : r.column(p.index, "error_aggregated"))
        if (!std::isnan(v)) agg.push_back(v);
      o["aggregated_replicates"] = agg.size();
      o["mean_error_aggregated"] = mean(agg);
      const auto q = r.column(p.index, "rate_bound");
      o["rate_bound"] = q.empty() ? kNaN : q.front();
      points.push_back(o);
    }
    return json{{"points", points}};
  };
  return s;
}

// ---------------------------------------------------------------- gmm-rate

ExperimentSpec gmm_rate() {
  ExperimentSpec s;
  s.kind = ExperimentKind::GmmRate;
  s.description = "misclassification of sgn(u1(G)) in the binary GMM as SNR varies";
  s.params = {{"n", 2000, "sample size"}, {"d", 2000, "dimension"}, {"snr", 4, "||mu||^4 / (||mu||^2 + d/n)"}};
  s.options = {{"eigensolver", {"krylov", "dense"}, "solver for the leading eigenpair of G"}};
  s.metrics = {"snr", "mu_norm", "error", "exact", "lambda1"};
  s.check = [](const GridPoint& p) {
    need(p.count("n") >= 2 && p.count("d") >= 1, "need n >= 2 and d >= 1");
    need(p["snr"] > 0, "snr must be positive");
  };
  s.run = [](const GridPoint& p, const Seed& seed, bool) {
    const Index n = p.count("n"), d = p.count("d");
    const double mu_norm = std::sqrt(gmm_mu2(p["snr"], d, n));
    const GmmParams params = GmmParams::symmetric_binary(unit_e1(d, mu_norm));
    const GmmSample sample = sample_gmm(params, n, seed);
    const SymmetricMatrix g = hollow(gram(sample.x));
    const auto top = eigh_window(g, EigenOrdering::DescendingByValue, 0, 1, kDefaultEigenTol, solver_of(p));
    const double err = misclassification(sign_labels(top.vectors.col(0)), sample.labels);
    ReplicateOutput out;
    out.metrics = {snr_gmm(mu_norm, d, n), mu_norm, err, as_flag(err == 0.0), top.values(0)};
    return out;
  };
  s.summarize = [](const ExperimentResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
      json o = point_json(p);
      o["mean_error"] = mean(r.column(p.index, "error"));
      o["exact_recovery_frequency"] = mean(r.column(p.index, "exact"));
      points.push_back(o);
    }
    // Slope of log(mean error) on SNR within 1 < SNR <= 2 log n, per (n, d).
    json fits = json::array();
    for (const auto& [key, members] : groups_without(r, "snr")) {
      std::vector<double> xs, ys;
      for (Index g : members) {
        const GridPoint& p = r.points[static_cast<std::size_t>(g)];
        const double m = mean(r.column(g, "error"));
        if (p["snr"] > 1.0 && p["snr"] <= 2.0 * log_n(p.count("n")) && m > 0.0) {
          xs.push_back(p["snr"]);
          ys.push_back(std::log(m));
        }
      }
      const GridPoint& first = r.points[static_cast<std::size_t>(members.front())];
      fits.push_back(json{{"n", first["n"]}, {"d", first["d"]}, {"snr", xs}, {"log_mean_error", ys},
                          {"slope", fit_slope(xs, ys)}});
    }
    return json{{"points", points}, {"fits", fits}};
  };
  return s;
}

// ---------------------------------------------------------------- lp-approx

double scaled_snr(const GridPoint& p) {
  if (p.option("snr_scaling") == "log") return p["snr"] * log_n(p.count("n")) / log_n(p.count("snr_reference_n"));
  return p["snr"];
}

double exponent_for(const GridPoint& p, double snr) {
  const std::string& how = p.option("p_strategy");
  if (how == "log") return p["p_value"] * log_n(p.count("n"));
  if (how == "fixed") return p["p_value"];
  return std::max(snr, 2.0);
}

// ||x||_inf <= ||x||_{c log n} <= e^{1/c} ||x||_inf for the row norms of m.
bool sandwich_holds(const Matrix& m, Index n) {
  const double inf = norm_2p(m, LpExponent::infinity());
  for (double c : {1.0, 2.0}) {
    const double mid = norm_2p(m, LpExponent(std::max(1.0, c * log_n(n))));
    const double slack = 1e-12 * std::max(inf, 1e-300);
    if (!(inf <= mid + slack && mid <= std::exp(1.0 / c) * inf + slack)) return false;
  }
  return true;
}

ExperimentSpec lp_approx() {
  ExperimentSpec s;
  s.kind = ExperimentKind::LpApprox;
  s.description = "l_{2,p} distance between eigenvectors and their linear approximations";
  s.params = {{"n", 400, "sample size"},
              {"d", 200, "dimension"},
              {"snr", 10, "signal-to-noise ratio (at snr_reference_n when snr_scaling = log)"},
              {"snr_reference_n", 400, "n at which snr applies under log scaling"},
              {"p_value", 1, "c in p = c log n (p_strategy = log) or p itself (fixed)"}};
  s.options = {{"model", {"gmm", "identity", "simplex"}, "binary GMM or a 3-cluster geometry"},
               {"p_strategy", {"snr", "log", "fixed"}, "how the exponent p is chosen"},
               {"snr_scaling", {"fixed", "log"}, "log: SNR = snr log n / log snr_reference_n"}};
  s.metrics = {"snr",          "p",           "ratio_vectors_gram", "ratio_vectors_linear", "ratio_scores_gram",
               "ratio_scores_linear", "error_sign", "oracle_agreement", "sandwich_ok"};
  s.check = [](const GridPoint& p) {
    need(p.count("n") >= 4 && p.count("d") >= 3, "need n >= 4 and d >= 3");
    need(p["snr"] > 0 && p.count("snr_reference_n") >= 2, "snr must be positive, snr_reference_n >= 2");
    const double e = exponent_for(p, scaled_snr(p));
    need(e >= 2.0, "the exponent p must be >= 2");
  };
  s.run = [](const GridPoint& p, const Seed& seed, bool) {
    const Index n = p.count("n"), d = p.count("d");
    const double snr = scaled_snr(p);
    const LpExponent pe(exponent_for(p, snr));
    const std::string& model = p.option("model");
    GmmParams params;
    Index r = 1;
    if (model == "gmm") {
      params = GmmParams::symmetric_binary(unit_e1(d, std::sqrt(gmm_mu2(snr, d, n))));
    } else {
      const auto [unit, rank] = geometry(model, d);
      params.centers = scaled_centers(unit, snr, isotropic_noise_scale(1.0, d), n);
      params.labels = balanced_blocks(n, unit.rows());
      r = rank;
    }
    const GmmSample sample = sample_gmm(params, n, seed);
    const LpResiduals res = lp_residuals(sample.x, sample.signal, 0, r, pe);
    double error = kNaN, agreement = kNaN;
    if (model == "gmm") {
      const SymmetricMatrix g = hollow(gram(sample.x));
      Vector u = eigh_window(g, EigenOrdering::DescendingByValue, 0, 1).vectors.col(0);
      const LabelVector yhat = sign_labels(u);
      error = misclassification(yhat, sample.labels);
      if (u.dot(sample.labels.as_signs()) < 0) u = -u;
      const LabelVector aligned = sign_labels(u);
      const LabelVector oracle = oracle_lda_all(sample.x, sample.labels);
      Index agree = 0;
      for (Index i = 0; i < n; ++i) agree += aligned[i] == oracle[i];
      agreement = static_cast<double>(agree) / static_cast<double>(n);
    }
    bool sandwich = true;
    for (const auto& m : res.residuals) sandwich = sandwich && sandwich_holds(m, n);
    ReplicateOutput out;
    out.metrics = {snr,
                   pe.value(),
                   res.reports[0].ratio,
                   res.reports[1].ratio,
                   res.reports[2].ratio,
                   res.reports[3].ratio,
                   error,
                   agreement,
                   as_flag(sandwich)};
    return out;
  };
  s.summarize = [](const ExperimentResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
      json o = point_json(p);
      for (const char* m : {"ratio_vectors_gram", "ratio_vectors_linear", "ratio_scores_gram", "ratio_scores_linear"})
        o[std::string("median_") + m] = median(r.column(p.index, m));
      o["sandwich_all"] = mean(r.column(p.index, "sandwich_ok")) == 1.0;
      points.push_back(o);
    }
    return json{{"points", points}};
  };
  return s;
}

// ---------------------------------------------------------------- kmeans-mixture

ExperimentSpec kmeans_mixture() {
  ExperimentSpec s;
  s.kind = ExperimentKind::KmeansMixture;
  s.description = "hollowed spectral clustering with k-means on mixture geometries";
  s.params = {{"n", 300, "sample size, split into equal contiguous blocks"},
              {"d", 300, "dimension"},
              {"snr", 22.8, "min{s^2/||S||_op, n s^4/||S||_HS^2}"},
              {"r", 0, "embedding rank; 0 means rank of the center Gram matrix"},
              {"noise_rank", 0, "noise covariance diag(1,...,1,0,...) with this many ones; 0 means d"}};
  s.options = {{"geometry", {"identity", "simplex", "antipodal"}, "center configuration"}};
  s.metrics = {"snr", "sbar", "effective_rank", "condition_ratio", "error", "exact", "cost", "r"};
  s.check = [](const GridPoint& p) {
    const Index n = p.count("n"), d = p.count("d"), r = p.count("r"), m = p.count("noise_rank");
    need(d >= 3 && n >= 6, "need d >= 3 and n >= 6");
    need(p["snr"] > 0, "snr must be positive");
    const Index k = p.option("geometry") == "antipodal" ? 2 : 3;
    need(r >= 0 && r <= k, "r must lie in [0, K]");
    need(m >= 0 && m <= d, "noise_rank must lie in [0, d]");
  };
  s.run = [](const GridPoint& p, const Seed& seed, bool) {
    const Index n = p.count("n"), d = p.count("d");
    const Index m = p.count("noise_rank") == 0 ? d : p.count("noise_rank");
    const auto [unit, rank] = geometry(p.option("geometry"), d);
    const Index k = unit.rows();
    const Index r = p.count("r") == 0 ? rank : p.count("r");
    const NoiseScale noise = isotropic_noise_scale(1.0, m);
    GmmParams params;
    params.centers = scaled_centers(unit, p["snr"], noise, n);
    params.labels = balanced_blocks(n, k);
    if (m == d) {
      params.noise = IsotropicNoise{1.0};
    } else {
      Vector v = Vector::Zero(d);
      v.head(m).setOnes();
      params.noise = DiagonalNoise{v};
    }
    const GmmSample sample = sample_gmm(params, n, seed);
    const KMeansResult km = spectral_cluster(sample.x, k, r, SpectralClusterOptions{}, seed.child(2));
    const double err = misclassification(km.labels, sample.labels, static_cast<int>(k));
    const double sbar = min_center_separation(params.centers);
    const double rank_eff = effective_rank(noise);
    ReplicateOutput out;
    out.metrics = {snr_mixture(params.centers, noise, n),
                   sbar,
                   rank_eff,
                   sbar * sbar / noise.op / std::max(1.0, std::sqrt(rank_eff / static_cast<double>(n))),
                   err,
                   as_flag(err == 0.0),
                   km.cost,
                   static_cast<double>(r)};
    return out;
  };
  s.summarize = [](const ExperimentResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
      json o = point_json(p);
      o["mean_error"] = mean(r.column(p.index, "error"));
      o["exact_recovery_frequency"] = mean(r.column(p.index, "exact"));
      points.push_back(o);
    }
    return json{{"points", points}};
  };
  return s;
}

}  // namespace

const std::vector<ExperimentSpec>& catalog() {
  static const std::vector<ExperimentSpec> specs = {hollowing_demo(), csbm_phase(), csbm_modified_sparse(),
                                                    gmm_rate(),       lp_approx(),  kmeans_mixture()};
  return specs;
}

}  // namespace hollowpca::experiments
