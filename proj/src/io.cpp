#include "clrsum/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <vector>

#include "clrsum/config.hpp"

namespace clrsum::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<double> parse_row(std::string_view line, const std::filesystem::path& path,
                              std::size_t line_no) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view field =
        trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      fail(ErrorCode::Io, path.string() + ":" + std::to_string(line_no) +
                              ": cannot parse number '" + std::string(field) + "'");
    }
    row.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return row;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row = parse_row(line, path, line_no);
    if (rows == 0) cols = row.size();
    if (row.size() != cols) {
      fail(ErrorCode::Io, path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(cols) + " columns, got " +
                              std::to_string(row.size()));
    }
    data.insert(data.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) fail(ErrorCode::Io, path.string() + ": empty file");
  Eigen::MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = data[r * cols + c];
  return m;
}

Recording read_recording(const std::filesystem::path& fluorescence,
                         const std::optional<std::filesystem::path>& positions) {
  Eigen::MatrixXd samples = read_csv_matrix(fluorescence);
  std::optional<Eigen::MatrixX2d> pos;
  if (positions) {
    Eigen::MatrixXd p = read_csv_matrix(*positions);
    require(p.cols() == 2, ErrorCode::Io, positions->string() + ": expected 2 columns");
    pos = Eigen::MatrixX2d(p);
  }
  return Recording(std::move(samples), std::move(pos));
}

namespace {

template <typename Matrix>
std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 20);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

void write_fluorescence(const std::filesystem::path& path, const Recording& rec) {
  write_text_file(path, matrix_to_csv(rec.samples()));
}

void write_positions(const std::filesystem::path& path, const Eigen::MatrixX2d& positions) {
  write_text_file(path, matrix_to_csv(positions));
}

GroundTruthNetwork read_network(const std::filesystem::path& path, Index neuron_count) {
  std::ifstream in = open_input(path);
  std::vector<Edge> edges;
  Index max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<double> row = parse_row(line, path, line_no);
    if (row.size() != 3) {
      fail(ErrorCode::Io, path.string() + ":" + std::to_string(line_no) +
                              ": expected 'i,j,w'");
    }
    const auto i = static_cast<Index>(row[0]);
    const auto j = static_cast<Index>(row[1]);
    if (static_cast<double>(i) != row[0] || static_cast<double>(j) != row[1] || i < 1 || j < 1) {
      fail(ErrorCode::Io, path.string() + ":" + std::to_string(line_no) +
                              ": indices must be positive integers");
    }
    if (row[2] != 1.0 && row[2] != -1.0) {
      fail(ErrorCode::Io, path.string() + ":" + std::to_string(line_no) +
                              ": weight must be -1 or 1");
    }
    max_index = std::max({max_index, i, j});
    edges.push_back({i - 1, j - 1, static_cast<int>(row[2])});
  }
  if (neuron_count == 0) neuron_count = max_index;
  require(max_index <= neuron_count, ErrorCode::Io,
          path.string() + ": edge index exceeds neuron count");
  return GroundTruthNetwork(neuron_count, std::move(edges));
}

void write_network(const std::filesystem::path& path, const GroundTruthNetwork& net) {
  std::string out;
  for (const Edge& e : net.edges()) {
    out += std::to_string(e.source + 1) + ',' + std::to_string(e.target + 1) + ',' +
           std::to_string(e.weight) + '\n';
  }
  write_text_file(path, out);
}

std::filesystem::path metadata_path(const std::filesystem::path& matrix_path) {
  std::filesystem::path p = matrix_path;
  p += ".meta";
  return p;
}

Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), path.string());
}

void write_metadata(const std::filesystem::path& path, const Metadata& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += k + " = " + v + '\n';
  write_text_file(path, out);
}

void write_score_matrix(const std::filesystem::path& path, const ScoreMatrix& m,
                        const Metadata& extra) {
  Metadata meta = extra;
  meta["name"] = m.name();
  meta["symmetric"] = m.symmetric() ? "true" : "false";
  meta["neurons"] = std::to_string(m.size());
  write_text_file(path, matrix_to_csv(m.values()));
  write_metadata(metadata_path(path), meta);
}

ScoreMatrix read_score_matrix(const std::filesystem::path& path) {
  Eigen::MatrixXd values = read_csv_matrix(path);
  require(values.rows() == values.cols(), ErrorCode::Io,
          path.string() + ": score matrix must be square");
  std::string name = path.stem().string();
  bool symmetric = ScoreMatrix::is_exactly_symmetric(values);
  const auto meta_file = metadata_path(path);
  if (std::filesystem::exists(meta_file)) {
    const Metadata meta = read_metadata(meta_file);
    if (auto it = meta.find("name"); it != meta.end()) name = it->second;
    if (auto it = meta.find("symmetric"); it != meta.end()) symmetric = it->second == "true";
  }
  return ScoreMatrix(std::move(values), symmetric, std::move(name));
}

std::string challenge_csv(const ScoreMatrix& m, const std::string& net_id) {
  std::string out;
  for (Index i = 0; i < m.size(); ++i) {
    for (Index j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      out += net_id + '_' + std::to_string(i + 1) + '_' + std::to_string(j + 1) + ',' +
             format_double(m(i, j)) + '\n';
    }
  }
  return out;
}

Eigen::MatrixXd parse_challenge_csv(const std::string& text, Index neuron_count) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(neuron_count, neuron_count);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto comma = line.rfind(',');
    const auto second = line.rfind('_', comma);
    const auto first = second == std::string::npos || second == 0
                           ? std::string::npos
                           : line.rfind('_', second - 1);
    if (comma == std::string::npos || first == std::string::npos) {
      fail(ErrorCode::Io, "submission line " + std::to_string(line_no) + ": malformed");
    }
    const std::string key_i = line.substr(first + 1, second - first - 1);
    const std::string key_j = line.substr(second + 1, comma - second - 1);
    const std::vector<double> ij = parse_row(key_i + "," + key_j, "submission", line_no);
    const std::vector<double> v = parse_row(line.substr(comma + 1), "submission", line_no);
    const auto i = static_cast<Index>(ij[0]) - 1;
    const auto j = static_cast<Index>(ij[1]) - 1;
    require(i >= 0 && j >= 0 && i < neuron_count && j < neuron_count && i != j, ErrorCode::Io,
            "submission line " + std::to_string(line_no) + ": neuron index out of range");
    m(i, j) = v[0];
  }
  return m;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::Io, "cannot move " + tmp.string() + " to " + path.string());
}

}  // namespace clrsum::io
