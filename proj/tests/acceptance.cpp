// Acceptance gate: every criterion below prints one [PASS]/[FAIL] line with
// its measured numbers. The process exits 0 only when all criteria hold.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpca/dpca.hpp"
#include "dpca/errors.hpp"
#include "dpca/io.hpp"
#include "dpca/linalg.hpp"
#include "dpca/model.hpp"
#include "dpca/sampling.hpp"
#include "dpca/wasserstein.hpp"

#include "cli_runner.hpp"
#include "test_helpers.hpp"

using dpca::DistributionDataset;
using dpca::DpcaModel;
using dpca::Matrix;
using dpca::MomentDistribution;
using dpca::Vector;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool condition, const std::string& message) {
    if (!condition) {
      pass_ = false;
      if (!failures_.empty()) {
        failures_ += "; ";
      }
      failures_ += message;
    }
  }

  Outcome finish(const std::string& detail) const {
    return {pass_, pass_ ? detail : failures_ + (detail.empty() ? "" : " [" + detail + "]")};
  }

 private:
  bool pass_ = true;
  std::string failures_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. Sampling comparison on the shipped example dataset: the sampled-data PC
//    converges to the distributional PC across seeds, and the means-only PC
//    sits farther from it wherever the two genuinely differ.
Outcome criterion_sampling_comparison() {
  const auto start = std::chrono::steady_clock::now();
  Check check;
  auto ds = dpca::io::load_dataset(cliutil::data_file("four_gaussians.json"));
  std::vector<Vector> means;
  for (const MomentDistribution& dist : ds.distributions()) {
    means.push_back(dist.mean);
  }

  const std::vector<std::uint64_t> seeds{0,    1000, 2000, 3000, 4000,
                                         5000, 6000, 7000, 8000, 9000};
  std::string summary;
  for (bool center : {true, false}) {
    DpcaModel reference = dpca::fit(ds, 1, center);
    DpcaModel means_model = dpca::pointwise_fit(means, 1, center);
    const double means_angle =
        dpca::principal_angles(reference.components, means_model.components)[0];

    std::vector<double> sampled_angles;
    int separated = 0;
    for (std::uint64_t seed : seeds) {
      DpcaModel sampled = dpca::monte_carlo_pca(ds, 1000, seed, 1, center);
      const double angle =
          dpca::principal_angles(reference.components, sampled.components)[0];
      sampled_angles.push_back(angle);
      check.require(angle <= 5.0, (center ? std::string("centered") : "uncentered") +
                                      " seed " + std::to_string(seed) +
                                      ": sampled angle " + fmt(angle) + " > 5 deg");
      if (means_angle >= angle) {
        ++separated;
      }
    }
    const double med = testutil::median(sampled_angles);
    check.require(med <= 2.0, std::string(center ? "centered" : "uncentered") +
                                  ": median sampled angle " + fmt(med) + " > 2 deg");
    const double worst = *std::max_element(sampled_angles.begin(), sampled_angles.end());

    if (center) {
      check.require(separated >= 9, "centered: means-only beat the sampled angle in only " +
                                        std::to_string(separated) + "/10 seeds");
      summary += "centered max " + fmt(worst) + " / median " + fmt(med) +
                 " deg, means-only at " + fmt(means_angle) + " deg (farther in " +
                 std::to_string(separated) + "/10 seeds)";
    } else {
      // Without centering both second-moment matrices are diagonal here, so
      // the means-only and distributional axes coincide exactly and the
      // separation clause degenerates; assert the coincidence instead.
      check.require(means_angle <= 1e-10,
                    "uncentered: means-only angle " + fmt(means_angle) +
                        " deg, expected exact coincidence");
      summary += "; uncentered max " + fmt(worst) + " / median " + fmt(med) +
                 " deg, means-only coincides (" + fmt(means_angle) + " deg)";
    }
  }
  const double elapsed = seconds_since(start);
  check.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s >= 5 s");
  return check.finish(summary + "; " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 2. Golden values of the second-moment construction on the example dataset,
//    uncentered and centered, against hand arithmetic and the closed-form
//    2x2 eigendecomposition.
Outcome criterion_golden_values() {
  Check check;
  auto ds = testutil::four_gaussians();

  Matrix s = dpca::second_moment_matrix(ds);
  check.require(dpca::max_abs_diff(s, Matrix::from_rows({{5.0, 0.0}, {0.0, 8.0}})) <= 1e-12,
                "uncentered S != [[5,0],[0,8]]");
  DpcaModel flat = dpca::fit(ds, 1, false);
  check.require(std::abs(std::abs(flat.components(1, 0)) - 1.0) <= 1e-12 &&
                    std::abs(flat.components(0, 0)) <= 1e-12,
                "uncentered PC1 != (0,1) up to sign");
  check.require(std::abs(flat.eigenvalues[0] - 8.0) <= 1e-12,
                "uncentered lambda1 != 8");

  Matrix sc = dpca::second_moment_matrix(dpca::center(ds).first);
  const Matrix expected = Matrix::from_rows({{4.75, -0.5}, {-0.5, 7.0}});
  check.require(dpca::max_abs_diff(sc, expected) <= 1e-12,
                "centered S != [[4.75,-0.5],[-0.5,7]]");

  DpcaModel model = dpca::fit(ds, 1, true);
  check.require(std::abs(model.eigenvalues[0] - 7.10611) <= 1e-4,
                "centered lambda1 off: " + fmt(model.eigenvalues[0]));
  auto [lambda, v] = testutil::leading_eig_2x2(expected);
  const double angle = testutil::line_angle_deg(model.components.col(0), v);
  check.require(angle <= 0.01,
                "centered PC1 is " + fmt(angle) + " deg from the closed form");
  return check.finish("uncentered (0,1)/8 exact, centered lambda1 " +
                      fmt(model.eigenvalues[0]) + ", PC1 within " + fmt(angle) + " deg");
}

// ---------------------------------------------------------------------------
// 3. The two objectives are the same optimization: projected variance plus
//    reconstruction error equals the total variance on random datasets and
//    random orthonormal bases.
Outcome criterion_objective_identity() {
  const auto start = std::chrono::steady_clock::now();
  Check check;
  std::mt19937_64 rng(10007);
  double worst = 0.0;
  for (int outer = 0; outer < 100; ++outer) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng() % 8);
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 10);
    auto ds = testutil::random_dataset(rng, n, d);
    const double total = dpca::second_moment_matrix(ds).trace();
    for (int inner = 0; inner < 100; ++inner) {
      const std::size_t k = 1 + static_cast<std::size_t>(rng() % d);
      Matrix u = testutil::random_orthonormal(rng, d, k);
      const double variance = dpca::expected_projected_variance(ds, u);
      const double error = dpca::reconstruction_error(ds, u);
      const double residual =
          std::abs(variance + error - total) / (1.0 + std::abs(total));
      worst = std::max(worst, residual);
    }
  }
  check.require(worst <= 1e-9, "worst relative residual " + fmt(worst));
  const double elapsed = seconds_since(start);
  check.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s >= 10 s");
  return check.finish("10000 evaluations, worst relative residual " + fmt(worst) +
                      "; " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 4. The projection distance formula matches the general Gaussian W2 oracle,
//    and the translation decomposition holds.
Outcome criterion_projection_formula() {
  Check check;
  std::mt19937_64 rng(20011);
  double worst_formula = 0.0;
  double worst_translation = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng() % 8);
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % d);
    MomentDistribution dist = testutil::random_distribution(rng, d);
    Matrix q = dpca::projector(testutil::random_orthonormal(rng, d, k));

    const double formula = dpca::w2_projection(dist, q);
    const double oracle = dpca::w2_gaussian(dist, dpca::pushforward(dist, q));
    worst_formula =
        std::max(worst_formula, std::abs(formula - oracle) / (1.0 + formula));

    auto [left, right] = dpca::w2_translation_check(dist, q);
    worst_translation =
        std::max(worst_translation, std::abs(left - right) / (1.0 + std::abs(left)));
  }
  check.require(worst_formula <= 1e-7,
                "formula vs oracle relative gap " + fmt(worst_formula));
  check.require(worst_translation <= 1e-8,
                "translation decomposition relative gap " + fmt(worst_translation));
  return check.finish("200 trials, formula gap " + fmt(worst_formula) +
                      ", translation gap " + fmt(worst_translation));
}

// ---------------------------------------------------------------------------
// 5. Zero-covariance limit: the distributional fit on point data equals
//    pointwise PCA on the means.
Outcome criterion_zero_covariance_limit() {
  Check check;
  std::mt19937_64 rng(30011);
  double worst = 0.0;
  int checked = 0;
  while (checked < 50) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 5);
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 9);
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % (d - 1));
    std::vector<Vector> points;
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back(testutil::random_vector(rng, d, 2.0));
    }
    const bool center = checked % 2 == 0;

    // the subspace is only pinned down by a clear spectral gap at the cut
    DpcaModel full = dpca::pointwise_fit(points, d, center);
    if (full.eigenvalues[k - 1] - full.eigenvalues[k] <= 1e-6) {
      continue;
    }
    DpcaModel from_points = dpca::pointwise_fit(points, k, center);
    DpcaModel from_dists = dpca::fit(testutil::point_dataset(points), k, center);
    Vector angles =
        dpca::principal_angles(from_dists.components, from_points.components);
    worst = std::max(worst, angles.back());
    ++checked;
  }
  check.require(worst <= 1e-8, "worst principal angle " + fmt(worst) + " deg");
  return check.finish("50 datasets, worst principal angle " + fmt(worst) + " deg");
}

// ---------------------------------------------------------------------------
// 6. Isotropic invariance: adding sigma^2 I to every covariance shifts each
//    eigenvalue by n sigma^2 and leaves the subspace alone.
Outcome criterion_isotropic_invariance() {
  Check check;
  std::mt19937_64 rng(40009);
  double worst_angle = 0.0;
  double worst_shift = 0.0;
  int checked = 0;
  while (checked < 10) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 6);
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 8);
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % d);
    auto ds = testutil::random_dataset(rng, n, d);
    DpcaModel spectrum = dpca::fit(ds, d, false);
    if (k < d && spectrum.eigenvalues[k - 1] - spectrum.eigenvalues[k] <=
                     1e-6 * (1.0 + spectrum.eigenvalues[0])) {
      continue;
    }
    DpcaModel base = dpca::fit(ds, k, false);
    for (double sigma2 : {0.1, 1.0, 10.0}) {
      std::vector<MomentDistribution> lifted;
      for (const MomentDistribution& dist : ds.distributions()) {
        MomentDistribution moved = dist;
        for (std::size_t j = 0; j < d; ++j) {
          moved.covariance(j, j) += sigma2;
        }
        lifted.push_back(std::move(moved));
      }
      DpcaModel shifted =
          dpca::fit(DistributionDataset::create(std::move(lifted)), k, false);
      Vector angles = dpca::principal_angles(base.components, shifted.components);
      worst_angle = std::max(worst_angle, angles.back());
      const double expected_shift = static_cast<double>(n) * sigma2;
      for (std::size_t j = 0; j < k; ++j) {
        const double target = base.eigenvalues[j] + expected_shift;
        worst_shift = std::max(
            worst_shift, std::abs(shifted.eigenvalues[j] - target) / (1.0 + std::abs(target)));
      }
    }
    ++checked;
  }
  check.require(worst_angle <= 1e-8, "worst angle " + fmt(worst_angle) + " deg");
  check.require(worst_shift <= 1e-9, "worst eigenvalue shift residual " + fmt(worst_shift));
  return check.finish("sigma^2 in {0.1, 1, 10} on 10 datasets, worst angle " +
                      fmt(worst_angle) + " deg, worst shift residual " + fmt(worst_shift));
}

// ---------------------------------------------------------------------------
// 7. Optimality: the fitted components beat random orthonormal candidates on
//    both objectives.
Outcome criterion_optimality() {
  Check check;
  std::mt19937_64 rng(50021);
  double slack_variance = 0.0;  // most a candidate ever exceeded the fit
  double slack_error = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 7);
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 9);
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % d);
    auto ds = testutil::random_dataset(rng, n, d);
    DpcaModel model = dpca::fit(ds, k, false);
    const double best_variance =
        dpca::expected_projected_variance(ds, model.components);
    const double best_error = dpca::reconstruction_error(ds, model.components);
    for (int candidate = 0; candidate < 1000; ++candidate) {
      Matrix u = testutil::random_orthonormal(rng, d, k);
      slack_variance = std::max(
          slack_variance, dpca::expected_projected_variance(ds, u) - best_variance);
      slack_error =
          std::max(slack_error, best_error - dpca::reconstruction_error(ds, u));
    }
  }
  check.require(slack_variance <= 1e-9,
                "a candidate beat the fitted variance by " + fmt(slack_variance));
  check.require(slack_error <= 1e-9,
                "a candidate beat the fitted error by " + fmt(slack_error));
  return check.finish("20 datasets x 1000 candidates, worst variance excess " +
                      fmt(slack_variance) + ", worst error excess " + fmt(slack_error));
}

// ---------------------------------------------------------------------------
// 8. Eigensolver quality on random symmetric matrices.
Outcome criterion_eigensolver_quality() {
  Check check;
  std::mt19937_64 rng(60013);
  double worst_recon = 0.0;
  double worst_orth = 0.0;
  double worst_trace = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng() % 16);
    const double scale = trial % 3 == 0 ? 1e3 : (trial % 3 == 1 ? 1.0 : 1e-3);
    Matrix a = testutil::random_symmetric(rng, d, scale);
    auto eig = dpca::sym_eig(a);

    Matrix recon = eig.eigenvectors * Matrix::diagonal(eig.eigenvalues) *
                   eig.eigenvectors.transpose();
    worst_recon =
        std::max(worst_recon, dpca::max_abs_diff(recon, a) / (1.0 + a.max_abs()));

    Matrix gram = eig.eigenvectors.transpose() * eig.eigenvectors;
    worst_orth =
        std::max(worst_orth, dpca::max_abs_diff(gram, Matrix::identity(d)));

    double sum = 0.0;
    for (double lambda : eig.eigenvalues) {
      sum += lambda;
    }
    worst_trace = std::max(
        worst_trace, std::abs(sum - a.trace()) / (1.0 + a.frobenius_norm()));
  }
  check.require(worst_recon <= 1e-9, "reconstruction residual " + fmt(worst_recon));
  check.require(worst_orth <= 1e-10, "orthonormality residual " + fmt(worst_orth));
  check.require(worst_trace <= 1e-9, "trace residual " + fmt(worst_trace));
  return check.finish("100 matrices (d <= 16), residuals " + fmt(worst_recon) + " / " +
                      fmt(worst_orth) + " / " + fmt(worst_trace));
}

// ---------------------------------------------------------------------------
// 9. CLI contract: fit/compare/error/project round-trip the shipped dataset
//    with exit 0, error reports the golden split, malformed files exit 2.
Outcome criterion_cli_contract() {
  Check check;
  const std::string dataset = cliutil::data_file("four_gaussians.json");

  const std::string model_path = cliutil::temp_path("acc_model.json");
  auto fit = cliutil::run_cli({"fit", dataset, "--no-center", "-o", model_path});
  check.require(fit.exit_code == 0, "fit exited " + std::to_string(fit.exit_code));

  auto centered_fit = cliutil::run_cli(
      {"fit", dataset, "-o", cliutil::temp_path("acc_model_centered.json")});
  check.require(centered_fit.exit_code == 0,
                "centered fit exited " + std::to_string(centered_fit.exit_code));

  auto error = cliutil::run_cli({"error", dataset, model_path});
  check.require(error.exit_code == 0, "error exited " + std::to_string(error.exit_code));
  double err_value = -1.0;
  double var_value = -1.0;
  double sum_value = -1.0;
  {
    std::istringstream in(error.output);
    std::string name;
    double value = 0.0;
    while (in >> name >> value) {
      if (name == "reconstruction_error") err_value = value;
      if (name == "expected_projected_variance") var_value = value;
      if (name == "total_variance") sum_value = value;
    }
  }
  check.require(std::abs(err_value - 5.0) <= 1e-9, "error printed " + fmt(err_value));
  check.require(std::abs(var_value - 8.0) <= 1e-9, "variance printed " + fmt(var_value));
  check.require(std::abs(sum_value - 13.0) <= 1e-9, "total printed " + fmt(sum_value));

  const std::string proj_path = cliutil::temp_path("acc_projected.json");
  auto project = cliutil::run_cli({"project", dataset, model_path, "-o", proj_path});
  check.require(project.exit_code == 0,
                "project exited " + std::to_string(project.exit_code));
  auto projected = dpca::io::load_dataset(proj_path);
  check.require(projected.dimension() == 1 && projected.size() == 4,
                "projected dataset has the wrong shape");

  const std::string report_path = cliutil::temp_path("acc_report.json");
  auto compare = cliutil::run_cli(
      {"compare", dataset, "--seed", "0", "-m", "200", "-o", report_path});
  check.require(compare.exit_code == 0,
                "compare exited " + std::to_string(compare.exit_code));
  auto report = nlohmann::json::parse(dpca::io::read_file(report_path));
  check.require(report["methods"].size() == 3, "report lists the wrong method count");

  const std::string broken = cliutil::temp_path("acc_broken.json");
  dpca::io::write_file(broken, "{ definitely not json");
  check.require(cliutil::run_cli({"fit", broken}).exit_code == 2,
                "fit on malformed file did not exit 2");
  check.require(cliutil::run_cli({"error", dataset, broken}).exit_code == 2,
                "error on malformed model did not exit 2");
  check.require(cliutil::run_cli({"compare", broken}).exit_code == 2,
                "compare on malformed file did not exit 2");

  return check.finish("fit/error/project/compare exit 0, error prints (" + fmt(err_value) +
                      ", " + fmt(var_value) + ", " + fmt(sum_value) +
                      "), malformed files exit 2");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria = {
      {1, "sampling comparison on the example dataset", criterion_sampling_comparison},
      {2, "golden second-moment values", criterion_golden_values},
      {3, "objective identity on random data", criterion_objective_identity},
      {4, "projection distance formula vs Gaussian oracle", criterion_projection_formula},
      {5, "zero-covariance limit equals pointwise PCA", criterion_zero_covariance_limit},
      {6, "isotropic covariance shift invariance", criterion_isotropic_invariance},
      {7, "optimality of the fitted components", criterion_optimality},
      {8, "eigensolver quality", criterion_eigensolver_quality},
      {9, "CLI contract", criterion_cli_contract},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) {
      ++failures;
    }
    std::printf("[%s] criterion %d: %s: %s\n", outcome.pass ? "PASS" : "FAIL",
                criterion.id, criterion.name, outcome.detail.c_str());
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d of %zu acceptance criteria FAILED\n", failures, criteria.size());
  }
  return failures == 0 ? 0 : 1;
}
