#include "levydrift/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levydrift {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string::npos ? std::string::npos
                                                             : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double(const std::string& tok, std::size_t row) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (...) {
    throw std::runtime_error("malformed CSV value '" + tok + "' at row " +
                             std::to_string(row));
  }
}

}  // namespace

std::string path_to_csv(const SamplePath& path) {
  std::ostringstream os;
  os << "t";
  for (int c = 0; c < path.d; ++c) os << ",X_" << (c + 1);
  os << "\n";
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    os << fmt(path.times[k]);
    for (int c = 0; c < path.d; ++c) {
      os << "," << fmt(path.states[k * path.d + c]);
    }
    os << "\n";
  }
  return os.str();
}

std::string jumps_to_csv(const SamplePath& path) {
  std::ostringstream os;
  os << "interval_index,jump_time";
  for (int c = 0; c < path.d; ++c) os << ",size_" << (c + 1);
  os << "\n";
  if (!path.has_jump_log) return os.str();
  for (std::size_t k = 0; k < path.jumps.size(); ++k) {
    for (const auto& j : path.jumps[k]) {
      os << k << "," << fmt(j.time);
      for (int c = 0; c < path.d; ++c) {
        os << "," << fmt(c == j.coord ? j.size : 0.0);
      }
      os << "\n";
    }
  }
  return os.str();
}

LoadedPath path_from_csv(const std::string& content) {
  std::istringstream is(content);
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("malformed CSV: empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  if (header.empty() || header[0] != "t") {
    throw std::runtime_error("malformed CSV header at row 1: expected leading 't'");
  }
  const int d = static_cast<int>(header.size()) - 1;
  if (d < 1) throw std::runtime_error("malformed CSV header at row 1: no states");
  for (int c = 0; c < d; ++c) {
    if (header[c + 1] != "X_" + std::to_string(c + 1)) {
      throw std::runtime_error("malformed CSV header at row 1: expected X_" +
                               std::to_string(c + 1));
    }
  }
  LoadedPath out;
  out.d = d;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto toks = split(line, ',');
    if (static_cast<int>(toks.size()) != d + 1) {
      throw std::runtime_error("malformed CSV at row " + std::to_string(row) +
                               ": expected " + std::to_string(d + 1) + " columns");
    }
    out.times.push_back(parse_double(toks[0], row));
    for (int c = 0; c < d; ++c) {
      out.states.push_back(parse_double(toks[c + 1], row));
    }
  }
  if (out.times.size() < 2) {
    throw std::runtime_error("malformed CSV: need at least 2 data rows");
  }
  return out;
}

std::vector<std::vector<JumpRecordObs>> jumps_from_csv(const std::string& content,
                                                       int d, int n_intervals) {
  std::istringstream is(content);
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("malformed jumps CSV: empty file");
  }
  std::vector<std::vector<JumpRecordObs>> out(n_intervals);
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto toks = split(line, ',');
    if (static_cast<int>(toks.size()) != d + 2) {
      throw std::runtime_error("malformed jumps CSV at row " +
                               std::to_string(row));
    }
    const long k = std::lround(parse_double(toks[0], row));
    if (k < 0 || k >= n_intervals) {
      throw std::runtime_error("jumps CSV: interval index out of range at row " +
                               std::to_string(row));
    }
    JumpRecordObs rec;
    rec.time = parse_double(toks[1], row);
    rec.coord = 0;
    rec.size = 0.0;
    for (int c = 0; c < d; ++c) {
      const double v = parse_double(toks[c + 2], row);
      if (v != 0.0) {
        rec.coord = c;
        rec.size = v;
      }
    }
    out[k].push_back(rec);
  }
  return out;
}

std::string result_to_json(const EstimationResult& result) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < result.theta_hat.size(); ++i) {
    os << "\"theta_hat_" << (i + 1) << "\": " << fmt(result.theta_hat[i]) << ", ";
  }
  for (std::size_t i = 0; i < result.normalized_error.size(); ++i) {
    os << "\"norm_err_" << (i + 1) << "\": " << fmt(result.normalized_error[i])
       << ", ";
  }
  for (std::size_t i = 0; i < result.normalized_error_sigma.size(); ++i) {
    os << "\"norm_err_sigma_" << (i + 1)
       << "\": " << fmt(result.normalized_error_sigma[i]) << ", ";
  }
  os << "\"retained\": " << result.retained << ", ";
  os << "\"retained_fraction\": " << fmt(result.retained_fraction) << ", ";
  os << "\"status\": \"" << to_string(result.status) << "\", ";
  os << "\"objective\": " << fmt(result.objective);
  if (result.closed_form_fallback) os << ", \"closed_form_fallback\": true";
  os << "}";
  return os.str();
}

std::string result_to_csv(const EstimationResult& result) {
  std::ostringstream head, row;
  for (std::size_t i = 0; i < result.theta_hat.size(); ++i) {
    head << "theta_hat_" << (i + 1) << ",";
    row << fmt(result.theta_hat[i]) << ",";
  }
  for (std::size_t i = 0; i < result.normalized_error.size(); ++i) {
    head << "norm_err_" << (i + 1) << ",";
    row << fmt(result.normalized_error[i]) << ",";
  }
  head << "retained,retained_fraction,status,objective";
  row << result.retained << "," << fmt(result.retained_fraction) << ","
      << to_string(result.status) << "," << fmt(result.objective);
  return head.str() + "\n" + row.str() + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace levydrift
