#include "varitool/varifold_io.hpp"

#include "varitool/errors.hpp"
#include "varitool/report.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace varitool {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, int line) {
  if (s == "inf" || s == "-inf" || s == "nan") throw SchemaError("line " + std::to_string(line), "non-finite value");
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw SchemaError("line " + std::to_string(line), "not a number: '" + s + "'");
  return x;
}

std::string expected_header(int n) {
  std::ostringstream os;
  for (int i = 0; i < n; ++i) os << 'x' << i << ',';
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) os << 'P' << r << c << ',';
  os << 'w';
  return os.str();
}

}  // namespace

void write_varifold_csv(const DiscreteVarifold& v, std::ostream& out) {
  const int n = v.n();
  out << "m,n\n" << v.m() << ',' << n << '\n' << expected_header(n) << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (int d = 0; d < n; ++d) out << format_double(v.position(i)(d)) << ',';
    const Mat& p = v.plane(i).proj();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out << format_double(p(r, c)) << ',';
    out << format_double(v.weight(i)) << '\n';
  }
}

std::string varifold_csv(const DiscreteVarifold& v) {
  std::ostringstream os;
  write_varifold_csv(v, os);
  return os.str();
}

void save_varifold_csv(const DiscreteVarifold& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  write_varifold_csv(v, out);
}

DiscreteVarifold read_varifold_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next() || line != "m,n") throw SchemaError("line 1", "expected header 'm,n'");
  if (!next()) throw SchemaError("line 2", "missing dimensions");
  const auto dims = split(line);
  if (dims.size() != 2) throw SchemaError("line 2", "expected 'm,n' values");
  const int m = static_cast<int>(parse_number(dims[0], lineno));
  const int n = static_cast<int>(parse_number(dims[1], lineno));
  if (m < 1 || m > n) throw DomainError("varifold file: need 1 <= m <= n");
  if (!next() || line != expected_header(n)) throw SchemaError("line 3", "expected column header '" + expected_header(n) + "'");

  const std::size_t columns = static_cast<std::size_t>(n + n * n + 1);
  std::vector<double> positions;
  std::vector<double> weights;
  std::vector<Subspace> planes;
  std::vector<std::uint32_t> ids;
  std::map<std::vector<double>, std::uint32_t> seen;
  while (next()) {
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != columns)
      throw SchemaError("line " + std::to_string(lineno), "expected " + std::to_string(columns) + " columns");
    std::vector<double> row(columns);
    for (std::size_t k = 0; k < columns; ++k) row[k] = parse_number(fields[k], lineno);
    positions.insert(positions.end(), row.begin(), row.begin() + n);
    std::vector<double> key(row.begin() + n, row.begin() + n + n * n);
    auto it = seen.find(key);
    if (it == seen.end()) {
      Mat p(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) p(r, c) = key[r * n + c];
      Subspace s;
      try {
        s = Subspace::from_projection(p);
      } catch (const DomainError& e) {
        throw DomainError("line " + std::to_string(lineno) + ": " + e.what());
      }
      if (s.m() != m) throw DomainError("line " + std::to_string(lineno) + ": plane dimension differs from m");
      it = seen.emplace(std::move(key), static_cast<std::uint32_t>(planes.size())).first;
      planes.push_back(std::move(s));
    }
    ids.push_back(it->second);
    weights.push_back(row.back());
  }
  return DiscreteVarifold(m, n, std::move(positions), std::move(weights), std::move(planes), std::move(ids));
}

DiscreteVarifold load_varifold_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read '" + path + "'");
  return read_varifold_csv(in);
}

}  // namespace varitool
