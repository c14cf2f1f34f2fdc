#include "varitool/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace varitool {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string param_text(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return std::get<std::string>(v);
}

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

nlohmann::ordered_json params_json(const ParamMap& params) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) {
    if (const auto* d = std::get_if<double>(&v)) {
      out[k] = number(*d);
    } else {
      out[k] = std::get<std::string>(v);
    }
  }
  return out;
}

}  // namespace

void VerificationReport::finalize() {
  if (rhs == 0.0) {
    ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    ratio = lhs / rhs;
  }
  pass = ratio <= 1.0 + tolerance;
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS " : "FAIL ") << name << " [" << theorem << "] lhs=" << format_double(lhs)
     << " rhs=" << format_double(rhs) << " ratio=" << format_double(ratio);
  return os.str();
}

std::string BlowupSeries::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS " : "FAIL ") << name << " [blowup " << kind << ", p=" << format_double(p) << "] norms:";
  for (double x : norm) os << ' ' << format_double(x);
  if (!verdict.empty()) os << " (" << verdict << ")";
  return os.str();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string reports_csv(const std::vector<VerificationReport>& reports) {
  std::set<std::string> keys;
  for (const auto& r : reports)
    for (const auto& [k, v] : r.params) keys.insert(k);
  std::ostringstream os;
  os << "name,theorem,lhs,rhs,ratio,pass,conservative";
  for (const auto& k : keys) os << ',' << csv_field(k);
  os << '\n';
  for (const auto& r : reports) {
    std::string cons;
    for (std::size_t i = 0; i < r.conservative.size(); ++i) cons += (i ? "; " : "") + r.conservative[i];
    os << csv_field(r.name) << ',' << csv_field(r.theorem) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
       << ',' << format_double(r.ratio) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(cons);
    for (const auto& k : keys) {
      os << ',';
      const auto it = r.params.find(k);
      if (it != r.params.end()) os << csv_field(param_text(it->second));
    }
    os << '\n';
  }
  return os.str();
}

std::string series_csv(const BlowupSeries& series) {
  std::ostringstream os;
  os << "parameter,norm,budget,growthFactor\n";
  for (std::size_t i = 0; i < series.parameter.size(); ++i)
    os << format_double(series.parameter[i]) << ',' << format_double(series.norm[i]) << ','
       << format_double(series.budget[i]) << ',' << format_double(series.growthFactor[i]) << '\n';
  return os.str();
}

std::string results_json(const std::vector<VerificationReport>& reports, const std::vector<BlowupSeries>& series) {
  nlohmann::ordered_json doc;
  doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["theorem"] = r.theorem;
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["ratio"] = number(r.ratio);
    j["pass"] = r.pass;
    j["tolerance"] = r.tolerance;
    j["conservative"] = r.conservative;
    j["params"] = params_json(r.params);
    doc["reports"].push_back(std::move(j));
  }
  doc["series"] = nlohmann::ordered_json::array();
  for (const auto& s : series) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["kind"] = s.kind;
    j["p"] = number(s.p);
    j["pass"] = s.pass;
    j["verdict"] = s.verdict;
    auto arr = [](const std::vector<double>& xs) {
      nlohmann::ordered_json a = nlohmann::ordered_json::array();
      for (double x : xs) a.push_back(number(x));
      return a;
    };
    j["parameter"] = arr(s.parameter);
    j["norm"] = arr(s.norm);
    j["budget"] = arr(s.budget);
    j["growthFactor"] = arr(s.growthFactor);
    j["params"] = params_json(s.params);
    doc["series"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace varitool
