#pragma once

#include <string>

#include "dpca/dpca.hpp"
#include "dpca/model.hpp"

namespace dpca::io {

inline constexpr int kFormatVersion = 1;

/// Parses a versioned dataset document (JSON). A record without a covariance
/// is a point datum: its covariance is the zero matrix. Errors carry the
/// record index and label.
DistributionDataset parse_dataset(const std::string& text);
std::string render_dataset(const DistributionDataset& ds);

DpcaModel parse_model(const std::string& text);
std::string render_model(const DpcaModel& model);

/// Reads a whole file; throws ParseError naming the path when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

DistributionDataset load_dataset(const std::string& path);
DpcaModel load_model(const std::string& path);

}  // namespace dpca::io
