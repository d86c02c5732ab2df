#pragma once

#include "omsid/design.hpp"
#include "omsid/search.hpp"
#include "omsid/simulate.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace omsid {

// Shortest decimal form that parses back to the same double (inf/nan pass
// through as words).
std::string format_double(double x);

// Strict double parse of an entire field; throws on trailing garbage.
double parse_double(const std::string& field);

// trajectory.csv: header "t,z", one row per sample, full precision.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Reads a trajectory written by write_trajectory_csv (or any uniformly
// sampled t,z table); rejects irregular time grids.
Trajectory read_trajectory_csv(const std::string& path);

// Candidate-record tables (grid.csv, final.csv):
// k1,k2,theta_t,E1..E6,beta0..beta9,epsilon.
extern const char* kRecordHeader;
void write_record_row(std::ostream& out, const CandidateRecord& rec);
void write_records_csv(const std::string& path,
                       const std::vector<CandidateRecord>& records);
std::vector<CandidateRecord> read_records_csv(const std::string& path);

// Same table with a leading iteration column, for search traces.
void write_trace_csv(const std::string& path,
                     const std::vector<CandidateRecord>& records);

// Debug dump of the regression system: 38 labelled feature columns plus the
// differenced accelerations.
void write_design_csv(const std::string& path, const DesignSystem& design);

}  // namespace omsid
