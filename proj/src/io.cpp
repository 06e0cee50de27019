#include "phaselab/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace phaselab::io {

namespace {

std::string pair_key(std::size_t i, std::size_t j) { return std::to_string(i) + "," + std::to_string(j); }

std::vector<std::size_t> parse_key(const std::string& key, std::size_t expected) {
  std::vector<std::size_t> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("malformed chart key '" + key + "'");
    }
    out.push_back(std::stoul(part));
  }
  if (out.size() != expected) throw InputError("chart key '" + key + "' has the wrong arity");
  return out;
}

json points_to_json(const std::vector<SamplePoint>& points) {
  json arr = json::array();
  for (const auto& p : points) arr.push_back(p);
  return arr;
}

std::vector<SamplePoint> points_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of points");
  std::vector<SamplePoint> out;
  for (const auto& p : j) {
    if (!p.is_array()) throw InputError(where + ": a point must be an array of numbers");
    SamplePoint x;
    for (const auto& c : p) {
      if (!c.is_number()) throw InputError(where + ": a point must be an array of numbers");
      x.push_back(c.get<double>());
    }
    out.push_back(std::move(x));
  }
  return out;
}

int line_of(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + int(std::count(text.begin(), text.begin() + std::ptrdiff_t(offset), '\n'));
}

/// Lines where the elements of the top-level array under `key` start.
std::vector<int> element_lines(const std::string& text, const std::string& key) {
  std::vector<int> lines;
  int depth = 0, line = 1;
  bool in_string = false, escape = false, armed = false, inside = false, expect_element = false;
  std::string last_string, current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n') ++line;
    if (in_string) {
      if (escape) {
        escape = false;
      } else if (ch == '\\') {
        escape = true;
      } else if (ch == '"') {
        in_string = false;
        last_string = current;
      } else {
        current += ch;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (inside && expect_element && depth == 2 && ch != ']') {
      lines.push_back(line);
      expect_element = false;
    }
    switch (ch) {
      case '"':
        in_string = true;
        current.clear();
        break;
      case ':':
        armed = depth == 1 && last_string == key;
        break;
      case '[':
      case '{':
        ++depth;
        if (armed && ch == '[' && depth == 2) {
          inside = true;
          expect_element = true;
        }
        armed = false;
        break;
      case ']':
      case '}':
        if (inside && depth == 2) return lines;
        --depth;
        break;
      case ',':
        if (inside && depth == 2) expect_element = true;
        break;
      default:
        break;
    }
  }
  return lines;
}

}  // namespace

json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const ComplexVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(to_json(v(i)));
  return arr;
}

json to_json(const StateLoop& loop) {
  json samples = json::array();
  for (const auto& s : loop.samples) samples.push_back(to_json(s.rho()));
  return {{"n", loop.n}, {"samples", samples}};
}

json to_json(const HomotopySheet& sheet) {
  json rows = json::array();
  for (std::size_t r = 0; r < sheet.rows.size(); ++r) {
    json cells = json::array();
    for (const auto& s : sheet.rows[r]) cells.push_back(to_json(s.rho()));
    rows.push_back({{"label", r < sheet.row_labels.size() ? sheet.row_labels[r] : ""}, {"states", cells}});
  }
  return {{"n", sheet.n}, {"rows", rows}};
}

json to_json(const SampledCover& cover) {
  json overlaps = json::object(), triples = json::object();
  for (const auto& [pair, points] : cover.overlaps()) overlaps[pair_key(pair.first, pair.second)] = points_to_json(points);
  for (const auto& [t, points] : cover.triples()) {
    triples[pair_key(t[0], t[1]) + "," + std::to_string(t[2])] = points_to_json(points);
  }
  return {{"charts", cover.n_charts()}, {"overlaps", overlaps}, {"triples", triples}};
}

json to_json(const U1Cochain1& c, const SampledCover& cover) {
  json values = json::object();
  for (const auto& [pair, points] : cover.overlaps()) {
    json arr = json::array();
    for (const auto& x : points) arr.push_back(to_json(c.value(pair.first, pair.second, x)));
    values[pair_key(pair.first, pair.second)] = arr;
  }
  return {{"charts", c.n_charts()}, {"values", values}};
}

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError(where + ": expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InputError(where + ": rows must be nonempty arrays");
  ComplexMatrix m(Index(j.size()), Index(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError(where + ": row " + std::to_string(r) + " has the wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(Index(r), Index(c)) = complex_from_json(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  if (!m.allFinite()) throw InputError(where + ": non-finite entry");
  return m;
}

SampledCover cover_from_json(const json& j) {
  if (!j.is_object() || !j.contains("charts") || !j["charts"].is_number_unsigned()) {
    throw InputError("cover: missing chart count");
  }
  SampledCover cover(j["charts"].get<std::size_t>());
  try {
    if (j.contains("overlaps")) {
      for (const auto& [key, pts] : j["overlaps"].items()) {
        const auto ij = parse_key(key, 2);
        cover.set_overlap(ij[0], ij[1], points_from_json(pts, "cover overlap " + key));
      }
    }
    if (j.contains("triples")) {
      for (const auto& [key, pts] : j["triples"].items()) {
        const auto ijk = parse_key(key, 3);
        cover.set_triple(ijk[0], ijk[1], ijk[2], points_from_json(pts, "cover triple " + key));
      }
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(std::string("cover: ") + e.what());
  }
  return cover;
}

U1Cochain1 u1_cochain_from_json(const json& j, const SampledCover& cover) {
  if (!j.is_object() || !j.contains("values")) throw InputError("cochain: missing values");
  U1Cochain1 c(cover.n_charts(), cplx(1));
  for (const auto& [key, vals] : j["values"].items()) {
    const auto ij = parse_key(key, 2);
    const auto& points = cover.overlap(ij[0], ij[1]);
    if (!vals.is_array() || vals.size() != points.size()) {
      throw InputError("cochain " + key + ": value count differs from the overlap samples");
    }
    std::vector<U1Cochain1::Entry> entries;
    // Points are stored for the canonical pair; values given for "j,i" refer to the same samples.
    for (std::size_t k = 0; k < points.size(); ++k) {
      const cplx g = complex_from_json(vals[k], "cochain " + key);
      if (std::abs(std::abs(g) - 1.0) > 1e-10) throw InputError("cochain " + key + ": value is not a unit scalar");
      entries.push_back({points[k], g});
    }
    c.set(ij[0], ij[1], std::move(entries));
  }
  return c;
}

HomotopySheet sheet_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("rows")) throw InputError("sheet: expected {n, rows}");
  HomotopySheet sheet;
  sheet.n = j["n"].get<Index>();
  for (std::size_t r = 0; r < j["rows"].size(); ++r) {
    const auto& row = j["rows"][r];
    std::vector<DensityState> states;
    for (std::size_t t = 0; t < row["states"].size(); ++t) {
      const std::string where = "sheet cell (s=" + std::to_string(r) + ", t=" + std::to_string(t) + ")";
      try {
        states.emplace_back(matrix_from_json(row["states"][t], where));
      } catch (const InputError&) {
        throw;
      } catch (const Error& e) {
        throw InputError(where + ": " + e.what());
      }
    }
    sheet.rows.push_back(std::move(states));
    sheet.row_labels.push_back(row.value("label", std::string()));
  }
  return sheet;
}

StateLoop loop_from_text(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ":" + std::to_string(line_of(text, e.byte)) + ": JSON syntax error: " + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("samples")) {
    throw InputError(source + ":1: loop document must be an object with 'n' and 'samples'");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) throw InputError(source + ": 'n' must be a positive integer");
  if (!j["samples"].is_array()) throw InputError(source + ": 'samples' must be an array");
  const std::vector<int> lines = element_lines(text, "samples");
  StateLoop loop;
  loop.n = j["n"].get<Index>();
  for (std::size_t t = 0; t < j["samples"].size(); ++t) {
    const std::string where =
        source + ":" + (t < lines.size() ? std::to_string(lines[t]) : std::string("?")) + ": sample " + std::to_string(t);
    try {
      const ComplexMatrix m = matrix_from_json(j["samples"][t], where);
      if (m.rows() != loop.n || m.cols() != loop.n) throw InputError(where + ": expected a " + std::to_string(loop.n) + "x" + std::to_string(loop.n) + " matrix");
      loop.samples.emplace_back(m);
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  try {
    loop.validate();
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return loop;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

}  // namespace phaselab::io
