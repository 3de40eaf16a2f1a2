#pragma once

#include <string>
#include <vector>

#include "flni/estimators.hpp"
#include "flni/model_select.hpp"
#include "flni/oracle.hpp"

namespace flni::io {

/// One decimal value per line, no header.
std::vector<double> read_signal_csv(const std::string& path);

/// Rows `lambda_f,lambda_l,lambda_ni`, no header.
std::vector<Penalties> read_penalty_grid_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// 17 significant digits: lossless double round-trip.
std::string format_double(double x);

std::string fit_result_to_json(const FitResult& fit,
                               const oracle::SubgradientCertificate* cert = nullptr);
std::string path_result_to_json(const PathResult& path);
std::string certificate_to_json(const oracle::SubgradientCertificate& cert);

}  // namespace flni::io
