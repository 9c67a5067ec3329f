#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ios>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "eigenflow/errors.hpp"
#include "eigenflow/grid.hpp"
#include "eigenflow/matrix.hpp"
#include "eigenflow/report.hpp"
#include "eigenflow/unordered.hpp"

namespace eigenflow::io {

using nlohmann::json;
using nlohmann::ordered_json;

/// Shortest round-trip decimal for a double; deterministic across runs so
/// re-exported CSV files are bit-identical.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Write-then-rename: the target never holds a partial file.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot open " + tmp.string());
    out << text;
    out.flush();
    if (!out.good()) throw Error(Errc::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw Error(Errc::IoError, "cannot move " + tmp.string() + " into place: " + ec.message());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoError, "read failure on " + path.string());
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::ParseError, "invalid JSON in " + what);
  return j;
}

// ---------------------------------------------------------------------------
// Matrices: {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.

inline ordered_json matrix_to_json(const ComplexMatrix& A) {
  if (!A.is_finite()) throw Error(Errc::IoError, "refusing to serialize a non-finite matrix");
  ordered_json j;
  j["rows"] = A.rows();
  j["cols"] = A.cols();
  std::vector<double> re, im;
  re.reserve(A.data().size());
  im.reserve(A.data().size());
  for (const cplx& v : A.data()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re") ||
      !j.contains("im"))
    throw Error(Errc::ParseError, "matrix object needs rows, cols, re, im");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw Error(Errc::ParseError, "rows and cols must be nonnegative integers");
  const std::size_t r = j["rows"].get<std::size_t>();
  const std::size_t c = j["cols"].get<std::size_t>();
  const json& re = j["re"];
  const json& im = j["im"];
  if (!re.is_array() || !im.is_array() || re.size() != r * c || im.size() != r * c)
    throw Error(Errc::ParseError, "re and im must be arrays of rows*cols numbers");
  std::vector<cplx> entries(r * c);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (!re[k].is_number() || !im[k].is_number())
      throw Error(Errc::ParseError, "matrix entries must be numbers");
    entries[k] = cplx(re[k].get<double>(), im[k].get<double>());
  }
  ComplexMatrix A(r, c, std::move(entries));
  if (!A.is_finite()) throw Error(Errc::ParseError, "matrix entries must be finite");
  return A;
}

// ---------------------------------------------------------------------------
// Unordered spectra: [[re, im], ...] in canonical (Re, Im)-lex order.

inline ordered_json spectrum_to_json(const UnorderedSpectrum& s) {
  ordered_json j = ordered_json::array();
  for (const cplx& z : s.canonical()) j.push_back({z.real(), z.imag()});
  return j;
}

inline UnorderedSpectrum spectrum_from_json(const json& j) {
  if (!j.is_array()) throw Error(Errc::ParseError, "spectrum must be an array of [re, im]");
  UnorderedSpectrum s;
  s.z.reserve(j.size());
  for (const json& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw Error(Errc::ParseError, "spectrum entries must be [re, im] pairs");
    s.z.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Matrix families on disk: a directory holding one JSON file per node plus
// a manifest {"lower", "upper", "spacing", "counts", "nodes": [files]} in
// row-major node order. Node paths are relative to the manifest location.
// "spacing" is redundant with "upper" but makes re-import exact; loaders
// accept manifests carrying either.

inline void write_family(const std::filesystem::path& dir,
                         const SampledFamily<ComplexMatrix>& F) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  ordered_json manifest;
  const Grid& g = F.grid;
  std::vector<double> upper(g.dim());
  for (std::size_t j = 0; j < g.dim(); ++j) upper[j] = g.upper(j);
  manifest["lower"] = g.lower();
  manifest["upper"] = upper;
  manifest["spacing"] = g.spacing();
  manifest["counts"] = g.counts();
  std::vector<std::string> nodes(g.node_count());
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    nodes[k] = "node_" + std::to_string(k) + ".json";
    write_text_atomic(dir / nodes[k], matrix_to_json(F.at(k)).dump(2) + "\n");
  }
  manifest["nodes"] = nodes;
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

inline SampledFamily<ComplexMatrix> read_family(const std::filesystem::path& input) {
  std::filesystem::path manifestPath = input;
  if (std::filesystem::is_directory(manifestPath)) manifestPath /= "manifest.json";
  const json m = parse_json(read_text(manifestPath), manifestPath.string());
  if (!m.is_object() || !m.contains("lower") || !m.contains("counts") || !m.contains("nodes"))
    throw Error(Errc::ParseError, "manifest needs lower, counts, nodes");
  const auto vecOf = [&](const char* key) {
    if (!m.contains(key) || !m[key].is_array())
      throw Error(Errc::ParseError, std::string("manifest key ") + key + " must be an array");
    return m[key].get<std::vector<double>>();
  };
  const std::vector<double> lower = vecOf("lower");
  if (!m["counts"].is_array())
    throw Error(Errc::ParseError, "manifest key counts must be an array");
  std::vector<std::size_t> counts;
  for (const json& c : m["counts"]) {
    if (!c.is_number_unsigned())
      throw Error(Errc::ParseError, "counts must be nonnegative integers");
    counts.push_back(c.get<std::size_t>());
  }
  Grid g = m.contains("spacing") ? Grid::with_spacing(lower, vecOf("spacing"), counts)
                                 : Grid(lower, vecOf("upper"), counts);
  const json& nodes = m["nodes"];
  if (!nodes.is_array() || nodes.size() != g.node_count())
    throw Error(Errc::ParseError, "manifest must list one node file per grid node");
  const std::filesystem::path base = manifestPath.parent_path();
  std::vector<ComplexMatrix> samples;
  samples.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!nodes[k].is_string())
      throw Error(Errc::ParseError, "node entries must be file names");
    const std::filesystem::path p = base / nodes[k].get<std::string>();
    try {
      samples.push_back(matrix_from_json(parse_json(read_text(p), p.string())));
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError || e.code() == Errc::IoError)
        throw Error(e.code(), "node file " + p.string() + " is unusable",
                    static_cast<long>(k));
      throw;
    }
  }
  return SampledFamily<ComplexMatrix>(std::move(g), std::move(samples));
}

// ---------------------------------------------------------------------------
// SampledFamily CSV: node multi-index, coordinates, then the flattened
// value components. Ordered flows get one column per branch; matrices get
// re/im column pairs; spectra are written in canonical order.

namespace detail {

inline void value_header(double, std::vector<std::string>& cols) { cols.push_back("value"); }

inline void value_header(const std::vector<double>& v, std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < v.size(); ++i) cols.push_back("value_" + std::to_string(i));
}

inline void value_header(const ComplexMatrix& A, std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      cols.push_back("re_" + std::to_string(i) + "_" + std::to_string(j));
      cols.push_back("im_" + std::to_string(i) + "_" + std::to_string(j));
    }
}

inline void value_header(const UnorderedSpectrum& s, std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    cols.push_back("re_" + std::to_string(i));
    cols.push_back("im_" + std::to_string(i));
  }
}

inline void value_row(double v, std::vector<std::string>& out) { out.push_back(fmt(v)); }

inline void value_row(const std::vector<double>& v, std::vector<std::string>& out) {
  for (double t : v) out.push_back(fmt(t));
}

inline void value_row(const ComplexMatrix& A, std::vector<std::string>& out) {
  for (const cplx& v : A.data()) {
    out.push_back(fmt(v.real()));
    out.push_back(fmt(v.imag()));
  }
}

inline void value_row(const UnorderedSpectrum& s, std::vector<std::string>& out) {
  for (const cplx& z : s.canonical()) {
    out.push_back(fmt(z.real()));
    out.push_back(fmt(z.imag()));
  }
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

}  // namespace detail

template <class V>
std::string family_to_csv(const SampledFamily<V>& F) {
  const Grid& g = F.grid;
  const std::size_t m = g.dim();
  std::vector<std::string> cols;
  for (std::size_t j = 0; j < m; ++j) cols.push_back("idx_" + std::to_string(j));
  for (std::size_t j = 0; j < m; ++j) cols.push_back("x_" + std::to_string(j));
  if (!F.samples.empty()) detail::value_header(F.at(0), cols);
  std::string text = detail::join(cols) + "\n";
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    std::vector<std::string> row;
    for (std::size_t idx : g.unflatten(k)) row.push_back(std::to_string(idx));
    for (double x : g.coordinate(k)) row.push_back(fmt(x));
    detail::value_row(F.at(k), row);
    text += detail::join(row) + "\n";
  }
  return text;
}

template <class V>
void write_family_csv(const std::filesystem::path& path, const SampledFamily<V>& F) {
  write_text_atomic(path, family_to_csv(F));
}

// ---------------------------------------------------------------------------
// Experiment reports: JSON carries everything; CSV carries the series side
// by side (index column, one column per series, ragged tails left empty).
// Files are named <name>_<params-hash>.{json,csv}.

inline ordered_json report_to_json(const ExperimentReport& r) {
  ordered_json j;
  j["name"] = r.name;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : r.meta) meta[k] = v;
  j["meta"] = meta;
  if (r.usedSeed) j["seed"] = r.seed;
  ordered_json scalars = ordered_json::object();
  for (const auto& [k, v] : r.scalars) scalars[k] = v;
  j["scalars"] = scalars;
  ordered_json series = ordered_json::object();
  for (const auto& [k, v] : r.series) series[k] = v;
  j["series"] = series;
  return j;
}

inline std::string report_to_csv(const ExperimentReport& r) {
  std::vector<std::string> cols{"index"};
  std::size_t rows = 0;
  for (const auto& [k, v] : r.series) {
    cols.push_back(k);
    rows = std::max(rows, v.size());
  }
  std::string text = detail::join(cols) + "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (const auto& [k, v] : r.series) row.push_back(i < v.size() ? fmt(v[i]) : std::string());
    text += detail::join(row) + "\n";
  }
  return text;
}

struct ReportPaths {
  std::filesystem::path jsonPath;
  std::filesystem::path csvPath;
};

inline ReportPaths write_report(const std::filesystem::path& dir, const ExperimentReport& r) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  const std::string stem = r.name + "_" + params_hash(r);
  ReportPaths paths{dir / (stem + ".json"), dir / (stem + ".csv")};
  write_text_atomic(paths.jsonPath, report_to_json(r).dump(2) + "\n");
  write_text_atomic(paths.csvPath, report_to_csv(r));
  return paths;
}

}  // namespace eigenflow::io
