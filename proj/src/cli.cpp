#include "dpca/cli.hpp"

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dpca/dpca.hpp"
#include "dpca/errors.hpp"
#include "dpca/io.hpp"
#include "dpca/linalg.hpp"
#include "dpca/model.hpp"
#include "dpca/sampling.hpp"

namespace dpca::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) {
    return value;
  }
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string display_label(const MomentDistribution& dist, std::size_t index) {
  return dist.label.empty() ? "dist" + std::to_string(index) : dist.label;
}

int compute_exit_code(const Error& e) {
  if (dynamic_cast<const NotPsdError*>(&e) != nullptr ||
      dynamic_cast<const NoConvergenceError*>(&e) != nullptr) {
    return kExitNumerical;
  }
  return kExitParse;
}

ordered_json matrix_rows(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void warn_eigengap(std::ostream& err, const std::string& what, const DpcaModel& model) {
  if (model.eigengap_warning) {
    err << "warning: " << what
        << ": eigengap at the cut is within tolerance of zero; the fitted "
           "subspace is not unique\n";
  }
}

Vector mean_of_means(const DistributionDataset& ds) {
  Vector anchor(ds.dimension(), 0.0);
  for (const MomentDistribution& dist : ds.distributions()) {
    for (std::size_t j = 0; j < anchor.size(); ++j) {
      anchor[j] += dist.mean[j];
    }
  }
  for (double& v : anchor) {
    v /= static_cast<double>(ds.size());
  }
  return anchor;
}

struct MethodResult {
  std::string name;
  DpcaModel model;
  double reconstruction_error = 0.0;
};

ordered_json method_entry(const MethodResult& method) {
  ordered_json entry;
  entry["name"] = method.name;
  entry["components"] = matrix_rows(method.model.components);
  entry["eigenvalues"] = method.model.eigenvalues;
  if (method.model.total_variance > 0.0) {
    entry["explained_variance_ratio"] = explained_variance_ratio(method.model);
  } else {
    entry["explained_variance_ratio"] = nullptr;
  }
  entry["total_variance"] = method.model.total_variance;
  entry["reconstruction_error"] = method.reconstruction_error;
  entry["eigengap_warning"] = method.model.eigengap_warning;
  return entry;
}

std::string build_report(const CompareOptions& opt, const DistributionDataset& ds,
                         const std::vector<MethodResult>& methods) {
  ordered_json doc;
  doc["format"] = "dpca-report";
  doc["version"] = io::kFormatVersion;
  doc["metadata"] = {{"n_distributions", ds.size()},
                     {"dimension", ds.dimension()},
                     {"n_components", opt.k},
                     {"samples_per_distribution", opt.samples},
                     {"seed", opt.seed},
                     {"centered", opt.center}};
  ordered_json entries = ordered_json::array();
  for (const MethodResult& method : methods) {
    entries.push_back(method_entry(method));
  }
  doc["methods"] = std::move(entries);

  // The angle table is filled symmetrically from one triangle so it is
  // symmetric by construction, not merely up to rounding.
  const std::size_t n = methods.size();
  std::vector<std::vector<Vector>> table(n, std::vector<Vector>(n));
  for (std::size_t i = 0; i < n; ++i) {
    table[i][i] = Vector(opt.k, 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      table[i][j] = principal_angles(methods[i].model.components,
                                     methods[j].model.components);
      table[j][i] = table[i][j];
    }
  }
  ordered_json names = ordered_json::array();
  for (const MethodResult& method : methods) {
    names.push_back(method.name);
  }
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < n; ++j) {
      row.push_back(table[i][j]);
    }
    rows.push_back(std::move(row));
  }
  doc["principal_angles_deg"] = {{"methods", std::move(names)},
                                 {"table", std::move(rows)}};
  return doc.dump(2) + "\n";
}

std::string build_plot_table(const CompareOptions& opt, const DistributionDataset& ds,
                             const std::vector<MethodResult>& methods) {
  const std::size_t d = ds.dimension();
  std::ostringstream out;
  out << "series,label,index";
  for (std::size_t j = 0; j < d; ++j) {
    out << ",x" << j;
  }
  out << "\n";

  auto row = [&](const std::string& series, const std::string& label,
                 std::size_t index, const Vector& point) {
    out << series << "," << csv_field(label) << "," << index;
    for (double v : point) {
      out << "," << fmt17(v);
    }
    out << "\n";
  };

  for (std::size_t i = 0; i < ds.size(); ++i) {
    row("mean", display_label(ds[i], i), i, ds[i].mean);
  }

  if (d == 2) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const Matrix b = cholesky(ds[i].covariance).factor;
      constexpr std::size_t kEllipsePoints = 64;
      for (std::size_t j = 0; j < kEllipsePoints; ++j) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(kEllipsePoints);
        const Vector unit = {std::cos(t), std::sin(t)};
        Vector point = b * unit;
        point[0] += ds[i].mean[0];
        point[1] += ds[i].mean[1];
        row("ellipse", display_label(ds[i], i), j, point);
      }
    }
  }

  for (std::size_t i = 0; i < ds.size(); ++i) {
    const SampleBatch batch = sample(ds[i], opt.samples, opt.seed + i);
    for (std::size_t j = 0; j < batch.points.size(); ++j) {
      row("sample", display_label(ds[i], i), j, batch.points[j]);
    }
  }

  // One segment per method through the mean of means, long enough to span
  // the cloud: reach = max_i (||mu_i - anchor|| + sqrt(lambda_max(Sigma_i))).
  const Vector anchor = mean_of_means(ds);
  double reach = 1.0;
  for (const MomentDistribution& dist : ds.distributions()) {
    Vector offset = dist.mean;
    for (std::size_t j = 0; j < d; ++j) {
      offset[j] -= anchor[j];
    }
    const double spread = std::sqrt(std::max(sym_eig(dist.covariance).eigenvalues[0], 0.0));
    reach = std::max(reach, norm(offset) + spread);
  }
  for (const MethodResult& method : methods) {
    const Matrix& u = method.model.components;
    for (int side = 0; side < 2; ++side) {
      const double scale = side == 0 ? -reach : reach;
      Vector endpoint = anchor;
      for (std::size_t j = 0; j < d; ++j) {
        endpoint[j] += scale * u(j, 0);
      }
      row("component", method.name, static_cast<std::size_t>(side), endpoint);
    }
  }
  return out.str();
}

std::string angle_summary(const Vector& angles) {
  std::string text = "[";
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i > 0) {
      text += ", ";
    }
    text += fmt6(angles[i]);
  }
  text += "]";
  return text;
}

}  // namespace

std::string plot_table_path(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + ".plot.csv";
}

int run_fit(const FitOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<DistributionDataset> ds;
  try {
    ds = io::load_dataset(opt.dataset_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  std::string document;
  try {
    const DpcaModel model = fit(*ds, opt.k, opt.center);
    warn_eigengap(err, "fit", model);
    document = io::render_model(model);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return compute_exit_code(e);
  }

  try {
    if (opt.output_path.empty()) {
      out << document;
    } else {
      io::write_file(opt.output_path, document);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitSuccess;
}

int run_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<DistributionDataset> ds;
  try {
    ds = io::load_dataset(opt.dataset_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  std::string report;
  std::string plot;
  std::vector<MethodResult> methods;
  try {
    std::vector<Vector> means;
    means.reserve(ds->size());
    for (const MomentDistribution& dist : ds->distributions()) {
      means.push_back(dist.mean);
    }

    methods.push_back({"distributional", fit(*ds, opt.k, opt.center), 0.0});
    methods.push_back({"means_only", pointwise_fit(means, opt.k, opt.center), 0.0});
    methods.push_back(
        {"sampled", monte_carlo_pca(*ds, opt.samples, opt.seed, opt.k, opt.center), 0.0});

    // Every method is scored on the same distributional objective, over the
    // centered moments when centering is on.
    const DistributionDataset eval_ds = opt.center ? dpca::center(*ds).first : *ds;
    for (MethodResult& method : methods) {
      method.reconstruction_error =
          reconstruction_error(eval_ds, method.model.components);
      warn_eigengap(err, method.name, method.model);
    }

    report = build_report(opt, *ds, methods);
    plot = build_plot_table(opt, *ds, methods);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return compute_exit_code(e);
  }

  try {
    if (opt.output_path.empty()) {
      out << report;
      out << "# plot table\n";
      out << plot;
    } else {
      const std::string plot_path = plot_table_path(opt.output_path);
      io::write_file(opt.output_path, report);
      io::write_file(plot_path, plot);
      out << "compared 3 methods on " << ds->size() << " distributions (d="
          << ds->dimension() << ", k=" << opt.k << ", m=" << opt.samples
          << ", seed=" << opt.seed << ", "
          << (opt.center ? "centered" : "uncentered") << ")\n";
      for (const MethodResult& method : methods) {
        out << "  " << method.name << ": eigenvalue[0] "
            << fmt6(method.model.eigenvalues[0]) << ", reconstruction error "
            << fmt6(method.reconstruction_error) << "\n";
      }
      for (std::size_t i = 0; i < methods.size(); ++i) {
        for (std::size_t j = i + 1; j < methods.size(); ++j) {
          out << "  angles_deg(" << methods[i].name << ", " << methods[j].name
              << ") " << angle_summary(principal_angles(
                             methods[i].model.components,
                             methods[j].model.components))
              << "\n";
        }
      }
      out << "wrote " << opt.output_path << " and " << plot_path << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitSuccess;
}

int run_error(const ErrorOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<DistributionDataset> ds;
  std::optional<DpcaModel> model;
  try {
    ds = io::load_dataset(opt.dataset_path);
    model = io::load_model(opt.model_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (model->dimension != ds->dimension()) {
      throw DimensionMismatchError(
          "model dimension " + std::to_string(model->dimension) +
          " does not match dataset dimension " + std::to_string(ds->dimension()));
    }
    DistributionDataset eval_ds = *ds;
    if (model->centering.applied) {
      std::vector<MomentDistribution> shifted;
      shifted.reserve(ds->size());
      for (const MomentDistribution& dist : ds->distributions()) {
        MomentDistribution moved = dist;
        for (std::size_t j = 0; j < moved.mean.size(); ++j) {
          moved.mean[j] -= model->centering.offset[j];
        }
        shifted.push_back(std::move(moved));
      }
      eval_ds = DistributionDataset::create(std::move(shifted));
    }
    const double error = reconstruction_error(eval_ds, model->components);
    const double variance = expected_projected_variance(eval_ds, model->components);
    out << "reconstruction_error " << fmt17(error) << "\n";
    out << "expected_projected_variance " << fmt17(variance) << "\n";
    out << "total_variance " << fmt17(error + variance) << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return compute_exit_code(e);
  }
  return kExitSuccess;
}

int run_project(const ProjectOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<DistributionDataset> ds;
  std::optional<DpcaModel> model;
  try {
    ds = io::load_dataset(opt.dataset_path);
    model = io::load_model(opt.model_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  std::string document;
  try {
    if (model->dimension != ds->dimension()) {
      throw DimensionMismatchError(
          "model dimension " + std::to_string(model->dimension) +
          " does not match dataset dimension " + std::to_string(ds->dimension()));
    }
    std::vector<MomentDistribution> projected;
    projected.reserve(ds->size());
    for (const MomentDistribution& dist : ds->distributions()) {
      ProjectedDistribution image = project(*model, dist);
      projected.push_back(
          {std::move(image.mean), std::move(image.covariance), std::move(image.label)});
    }
    document = io::render_dataset(DistributionDataset::create(std::move(projected)));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return compute_exit_code(e);
  }

  try {
    if (opt.output_path.empty()) {
      out << document;
    } else {
      io::write_file(opt.output_path, document);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitSuccess;
}

}  // namespace dpca::cli
