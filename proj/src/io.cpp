#include "dpca/io.hpp"

#include <cstddef>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dpca/errors.hpp"

namespace dpca::io {

namespace {

using nlohmann::ordered_json;

const ordered_json& require_field(const ordered_json& obj, const char* key,
                                  const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return *it;
}

double require_number(const ordered_json& value, const std::string& where) {
  if (!value.is_number()) {
    throw ParseError(where + ": expected a number");
  }
  return value.get<double>();
}

bool optional_bool(const ordered_json& obj, const char* key, bool fallback,
                   const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return fallback;
  }
  if (!it->is_boolean()) {
    throw ParseError(where + ": field '" + std::string(key) +
                     "' must be a boolean");
  }
  return it->get<bool>();
}

std::size_t require_positive_integer(const ordered_json& value,
                                     const std::string& where) {
  if (!value.is_number_integer() || value.get<std::int64_t>() <= 0) {
    throw ParseError(where + ": expected a positive integer");
  }
  return value.get<std::size_t>();
}

Vector parse_vector(const ordered_json& value, std::size_t expected,
                    const std::string& where) {
  if (!value.is_array() || value.size() != expected) {
    throw ParseError(where + ": expected an array of " +
                     std::to_string(expected) + " numbers");
  }
  Vector out;
  out.reserve(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    out.push_back(require_number(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Matrix parse_matrix(const ordered_json& value, std::size_t rows,
                    std::size_t cols, const std::string& where) {
  if (!value.is_array() || value.size() != rows) {
    throw ParseError(where + ": expected an array of " + std::to_string(rows) +
                     " rows");
  }
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Vector row = parse_vector(value[i], cols,
                              where + "[" + std::to_string(i) + "]");
    for (std::size_t j = 0; j < cols; ++j) {
      out(i, j) = row[j];
    }
  }
  return out;
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

ordered_json parse_document(const std::string& text, const char* kind,
                            const char* expected_format) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string(kind) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError(std::string(kind) + ": top level must be an object");
  }
  const auto& version = require_field(doc, "version", kind);
  if (!version.is_number_integer() ||
      version.get<std::int64_t>() != kFormatVersion) {
    throw ParseError(std::string(kind) + ": unsupported version (expected " +
                     std::to_string(kFormatVersion) + ")");
  }
  auto fmt = doc.find("format");
  if (fmt != doc.end() &&
      (!fmt->is_string() || fmt->get<std::string>() != expected_format)) {
    throw ParseError(std::string(kind) + ": format must be '" +
                     expected_format + "'");
  }
  return doc;
}

}  // namespace

DistributionDataset parse_dataset(const std::string& text) {
  const ordered_json doc = parse_document(text, "dataset", "dpca-dataset");
  const std::size_t d =
      require_positive_integer(require_field(doc, "dimension", "dataset"),
                               "dataset.dimension");
  const auto& records = require_field(doc, "distributions", "dataset");
  if (!records.is_array() || records.empty()) {
    throw ParseError("dataset: 'distributions' must be a non-empty array");
  }

  std::vector<MomentDistribution> dists;
  dists.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    std::string where = "dataset record #" + std::to_string(i);
    if (!rec.is_object()) {
      throw ParseError(where + ": expected an object");
    }
    std::string label;
    if (auto it = rec.find("label"); it != rec.end()) {
      if (!it->is_string()) {
        throw ParseError(where + ": field 'label' must be a string");
      }
      label = it->get<std::string>();
      where += " ('" + label + "')";
    }
    Vector mean =
        parse_vector(require_field(rec, "mean", where), d, where + ".mean");
    Matrix covariance(d, d);
    if (auto it = rec.find("covariance"); it != rec.end()) {
      covariance = parse_matrix(*it, d, d, where + ".covariance");
    }
    dists.push_back({std::move(mean), std::move(covariance), std::move(label)});
  }
  return DistributionDataset::create(std::move(dists));
}

std::string render_dataset(const DistributionDataset& ds) {
  ordered_json doc;
  doc["format"] = "dpca-dataset";
  doc["version"] = kFormatVersion;
  doc["dimension"] = ds.dimension();
  ordered_json records = ordered_json::array();
  for (const MomentDistribution& dist : ds.distributions()) {
    ordered_json rec;
    if (!dist.label.empty()) {
      rec["label"] = dist.label;
    }
    rec["mean"] = dist.mean;
    if (dist.covariance.max_abs() > 0.0) {
      rec["covariance"] = matrix_rows(dist.covariance);
    }
    records.push_back(std::move(rec));
  }
  doc["distributions"] = std::move(records);
  return doc.dump(2) + "\n";
}

DpcaModel parse_model(const std::string& text) {
  const ordered_json doc = parse_document(text, "model", "dpca-model");
  DpcaModel model;
  model.dimension = require_positive_integer(
      require_field(doc, "dimension", "model"), "model.dimension");
  model.n_components = require_positive_integer(
      require_field(doc, "n_components", "model"), "model.n_components");
  if (model.n_components > model.dimension) {
    throw ParseError("model: n_components exceeds dimension");
  }
  model.components =
      parse_matrix(require_field(doc, "components", "model"), model.dimension,
                   model.n_components, "model.components");
  model.eigenvalues =
      parse_vector(require_field(doc, "eigenvalues", "model"),
                   model.n_components, "model.eigenvalues");
  model.total_variance = require_number(
      require_field(doc, "total_variance", "model"), "model.total_variance");

  const auto& centering = require_field(doc, "centering", "model");
  if (!centering.is_object()) {
    throw ParseError("model.centering: expected an object");
  }
  model.centering.applied =
      optional_bool(centering, "applied", false, "model.centering");
  model.centering.offset =
      parse_vector(require_field(centering, "offset", "model.centering"),
                   model.dimension, "model.centering.offset");
  model.eigengap_warning =
      optional_bool(doc, "eigengap_warning", false, "model");

  // Q = U U^T must be a genuine projection for every downstream use.
  Matrix gram = model.components.transpose() * model.components;
  gram -= Matrix::identity(model.n_components);
  if (gram.max_abs() > 1e-8) {
    throw NotOrthonormalError("model: components are not orthonormal");
  }
  return model;
}

std::string render_model(const DpcaModel& model) {
  ordered_json doc;
  doc["format"] = "dpca-model";
  doc["version"] = kFormatVersion;
  doc["dimension"] = model.dimension;
  doc["n_components"] = model.n_components;
  doc["components"] = matrix_rows(model.components);
  doc["eigenvalues"] = model.eigenvalues;
  if (model.total_variance > 0.0) {
    doc["explained_variance_ratio"] = explained_variance_ratio(model);
  } else {
    doc["explained_variance_ratio"] = nullptr;
  }
  doc["total_variance"] = model.total_variance;
  doc["centering"] = {{"applied", model.centering.applied},
                      {"offset", model.centering.offset}};
  doc["eigengap_warning"] = model.eigengap_warning;
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot read file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw ParseError("cannot read file '" + path + "'");
  }
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) {
    throw Error("cannot write file '" + path + "'");
  }
}

DistributionDataset load_dataset(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_dataset(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DpcaModel load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace dpca::io
