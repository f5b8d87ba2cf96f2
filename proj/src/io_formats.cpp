#include "specdte/io_formats.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace specdte {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void check_finite(const Json& j, const std::string& where) {
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>()))
      throw Error("result document: non-finite number at " + (where.empty() ? "/" : where));
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_finite(v, where + "/" + k);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], where + "/" + std::to_string(i));
  }
}

}  // namespace

Matrix read_csv_grid(const fs::path& path, const CsvOptions& opts) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_pending = opts.header;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::size_t col = 0;
    std::size_t start = 0;
    for (;;) {
      std::size_t stop = line.find(opts.delimiter, start);
      const std::string_view cell =
          trim(line.substr(start, stop == std::string_view::npos ? line.npos : stop - start));
      ++col;
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        std::ostringstream os;
        os << path.string() << ": non-numeric cell '" << cell << "' at row " << line_no
           << ", column " << col;
        throw Error(os.str());
      }
      row.push_back(v);
      if (stop == std::string_view::npos) break;
      start = stop + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << path.string() << ": ragged row " << line_no << " has " << row.size()
         << " cells, expected " << rows.front().size();
      throw Error(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(path.string() + ": no data rows");

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

LoadedMatrix read_matrix_csv(const fs::path& path, const CsvOptions& opts) {
  Matrix m = read_csv_grid(path, opts);
  if (m.rows() != m.cols()) return BipartiteMatrix(std::move(m));
  try {
    return OutcomeMatrix(std::move(m), 0, opts.symmetrize_tol);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

OutcomeMatrix read_outcome_csv(const fs::path& path, int arm, const CsvOptions& opts) {
  Matrix m = read_csv_grid(path, opts);
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << path.string() << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(os.str());
  }
  try {
    return OutcomeMatrix(std::move(m), arm, opts.symmetrize_tol);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(const Matrix& m, const fs::path& path, char delimiter) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += delimiter;
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  atomic_write(path, out);
}

Json to_json(const ResultDocument& doc) {
  Json j;
  j["kind"] = doc.kind;
  j["inputs_digest"] = doc.inputs_digest;
  j["parameters"] = doc.parameters;
  j["payload"] = doc.payload;
  j["library_version"] = doc.library_version;
  return j;
}

ResultDocument result_from_json(const Json& j) {
  ResultDocument doc;
  try {
    doc.kind = j.at("kind").get<std::string>();
    doc.inputs_digest = j.at("inputs_digest").get<std::string>();
    doc.parameters = j.at("parameters");
    doc.payload = j.at("payload");
    doc.library_version = j.at("library_version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed result document: ") + e.what());
  }
  return doc;
}

std::string serialize(const ResultDocument& doc) {
  const Json j = to_json(doc);
  check_finite(j, "");
  return j.dump(2) + "\n";
}

void write_result_json(const ResultDocument& doc, const fs::path& path) {
  atomic_write(path, serialize(doc));
}

ResultDocument read_result_json(const fs::path& path) {
  try {
    return result_from_json(Json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string digest_files(const std::vector<fs::path>& paths) {
  std::string buf;
  for (const auto& p : paths) {
    const std::string content = read_file(p);
    buf += std::to_string(content.size());
    buf += ':';
    buf += content;
  }
  return sha256_hex(buf);
}

void write_density_samples(const std::vector<double>& values, const std::vector<double>& weights,
                           const fs::path& path) {
  if (values.size() != weights.size()) {
    std::ostringstream os;
    os << "density samples: " << values.size() << " values but " << weights.size()
       << " weights";
    throw Error(os.str());
  }
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!std::isfinite(values[k]) || !std::isfinite(weights[k]))
      throw Error("density samples: non-finite entry");
    if (weights[k] < 0.0) throw Error("density samples: negative weight");
    total += weights[k];
  }
  if (!values.empty() && !(total > 0.0)) throw Error("density samples: weights sum to zero");

  std::string out = "value,weight\n";
  for (std::size_t k = 0; k < values.size(); ++k)
    out += format_double(values[k]) + "," + format_double(weights[k] / total) + "\n";
  atomic_write(path, out);
}

DensityGrid gaussian_density_grid(const std::vector<double>& values,
                                  const std::vector<double>& weights, double h, int points) {
  if (values.size() != weights.size()) throw Error("density grid: length mismatch");
  if (values.empty()) throw Error("density grid: no samples");
  if (!(h > 0.0)) throw Error("density grid: bandwidth must be positive");
  if (points < 2) throw Error("density grid: need at least two points");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw Error("density grid: weights sum to zero");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;
  const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * h * total);
  DensityGrid g;
  g.x.resize(static_cast<std::size_t>(points));
  g.density.assign(static_cast<std::size_t>(points), 0.0);
  for (int p = 0; p < points; ++p) {
    const double x = lo + (hi - lo) * p / (points - 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double u = (x - values[k]) / h;
      acc += weights[k] * std::exp(-0.5 * u * u);
    }
    g.x[static_cast<std::size_t>(p)] = x;
    g.density[static_cast<std::size_t>(p)] = acc * norm;
  }
  return g;
}

void atomic_write(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("cannot write " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot write " + path.string());
  }
}

}  // namespace specdte
