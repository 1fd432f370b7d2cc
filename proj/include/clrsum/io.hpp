#pragma once

// CSV formats shared by every stage. External indices are 1-based.
//
//   fluorescence: T lines of N comma-separated values, no header
//   network:      lines "i,j,w" with w in {-1, 1}
//   positions:    N lines "x,y"
//   score matrix: N lines of N comma-separated values, plus "<file>.meta"
//                 holding "key = value" lines (name, symmetric, parameters)

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "clrsum/types.hpp"

namespace clrsum::io {

using Metadata = std::map<std::string, std::string>;

/// Formats a double with 17 significant digits so it parses back exactly.
std::string format_double(double v);

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);

Recording read_recording(const std::filesystem::path& fluorescence,
                         const std::optional<std::filesystem::path>& positions = std::nullopt);
void write_fluorescence(const std::filesystem::path& path, const Recording& rec);
void write_positions(const std::filesystem::path& path, const Eigen::MatrixX2d& positions);

/// Reads "i,j,w" lines. neuron_count 0 infers N from the largest index.
GroundTruthNetwork read_network(const std::filesystem::path& path, Index neuron_count = 0);
void write_network(const std::filesystem::path& path, const GroundTruthNetwork& net);

void write_score_matrix(const std::filesystem::path& path, const ScoreMatrix& m,
                        const Metadata& extra = {});
/// Reads a dense score matrix. The symmetric flag and name come from the
/// sidecar when present; otherwise symmetry is detected from the values.
ScoreMatrix read_score_matrix(const std::filesystem::path& path);

std::filesystem::path metadata_path(const std::filesystem::path& matrix_path);
Metadata read_metadata(const std::filesystem::path& path);
void write_metadata(const std::filesystem::path& path, const Metadata& meta);

/// Challenge submission rows "NETID_i_j,score" for every ordered pair i != j
/// (1-based), row-major over i then j.
std::string challenge_csv(const ScoreMatrix& m, const std::string& net_id);
/// Parses challenge_csv output back into an N x N matrix (zero diagonal).
Eigen::MatrixXd parse_challenge_csv(const std::string& text, Index neuron_count);

/// Writes `content` to `path` in one step through a temporary sibling file.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace clrsum::io
