#include "omsid/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace omsid {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  double x = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::runtime_error("bad numeric field: '" + field + "'");
  }
  return x;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,z\n";
  for (size_t i = 0; i < traj.z.size(); ++i) {
    out << format_double(traj.t(static_cast<int>(i))) << ','
        << format_double(traj.z[i]) << '\n';
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_fields(line).size() != 2) {
    throw std::runtime_error(path + ": missing t,z header");
  }

  std::vector<double> t, z;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 2 fields");
    }
    t.push_back(parse_double(fields[0]));
    z.push_back(parse_double(fields[1]));
  }
  if (t.size() < 2) {
    throw std::runtime_error(path + ": need at least 2 samples");
  }

  Trajectory traj;
  traj.dt = t[1] - t[0];
  traj.T = t.back();
  traj.z = std::move(z);
  if (!(traj.dt > 0.0)) {
    throw std::runtime_error(path + ": non-increasing time column");
  }
  const double scale = std::max(1.0, std::abs(traj.T));
  for (size_t i = 0; i < t.size(); ++i) {
    if (std::abs(t[i] - static_cast<double>(i) * traj.dt) > 1e-9 * scale) {
      throw std::runtime_error(path + ": time column is not uniform");
    }
  }
  return traj;
}

const char* kRecordHeader =
    "k1,k2,theta_t,E1,E2,E3,E4,E5,E6,"
    "beta0,beta1,beta2,beta3,beta4,beta5,beta6,beta7,beta8,beta9,epsilon";

void write_record_row(std::ostream& out, const CandidateRecord& rec) {
  out << format_double(rec.k1) << ',' << format_double(rec.k2) << ','
      << format_double(rec.theta_t) << ',' << format_double(rec.errors.e1)
      << ',' << format_double(rec.errors.e2) << ','
      << format_double(rec.errors.e3) << ',' << rec.errors.e4 << ','
      << rec.errors.e5 << ',' << format_double(rec.errors.e6);
  for (int i = 0; i < kDriftDim; ++i) {
    out << ',' << format_double(rec.beta[i]);
  }
  out << ',' << format_double(rec.epsilon) << '\n';
}

void write_records_csv(const std::string& path,
                       const std::vector<CandidateRecord>& records) {
  auto out = open_out(path);
  out << kRecordHeader << '\n';
  for (const CandidateRecord& rec : records) write_record_row(out, rec);
}

std::vector<CandidateRecord> read_records_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw std::runtime_error(path + ": unexpected header");
  }

  std::vector<CandidateRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 20) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 20 fields");
    }
    CandidateRecord rec;
    rec.k1 = parse_double(fields[0]);
    rec.k2 = parse_double(fields[1]);
    rec.theta_t = parse_double(fields[2]);
    rec.errors.e1 = parse_double(fields[3]);
    rec.errors.e2 = parse_double(fields[4]);
    rec.errors.e3 = parse_double(fields[5]);
    rec.errors.e4 = static_cast<int>(parse_double(fields[6]));
    rec.errors.e5 = static_cast<int>(parse_double(fields[7]));
    rec.errors.e6 = parse_double(fields[8]);
    for (int i = 0; i < kDriftDim; ++i) {
      rec.beta[i] = parse_double(fields[9 + i]);
    }
    rec.epsilon = parse_double(fields[19]);
    records.push_back(rec);
  }
  return records;
}

void write_trace_csv(const std::string& path,
                     const std::vector<CandidateRecord>& records) {
  auto out = open_out(path);
  out << "iter," << kRecordHeader << '\n';
  for (size_t i = 0; i < records.size(); ++i) {
    out << i << ',';
    write_record_row(out, records[i]);
  }
}

void write_design_csv(const std::string& path, const DesignSystem& design) {
  auto out = open_out(path);
  for (int j = 0; j < kElDim; ++j) out << kElLabels[j] << ',';
  out << "zdd\n";
  for (Eigen::Index i = 0; i < design.theta.rows(); ++i) {
    for (int j = 0; j < kElDim; ++j) {
      out << format_double(design.theta(i, j)) << ',';
    }
    out << format_double(design.zdd[i]) << '\n';
  }
}

}  // namespace omsid
