// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace denslab {

// Time-stamped values of monitored functionals. Records keep insertion
// order; for each name the times must strictly increase.
class InvariantSeries {
 public:
  struct Record {
    double time;
    std::string name;
    double value;
  };

  void append(double time, const std::string& name, double value);

  const std::vector<Record>& records() const { return records_; }
  std::vector<std::string> names() const;
  std::vector<double> values(const std::string& name) const;
  std::vector<double> times(const std::string& name) const;

  // max_t |v(t) - v(t0)| / |v(t0)|; absolute drift when |v(t0)| is below
  // floor.
  double relative_drift(const std::string& name, double floor = 1e-300) const;

  // CSV with header "time,name,value"; numbers printed with %.17g so the
  // text is a deterministic function of the stored doubles.
  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<Record> records_;
};

}  // namespace denslab
