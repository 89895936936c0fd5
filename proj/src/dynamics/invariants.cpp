// SPDX-License-Identifier: Apache-2.0
#include "denslab/dynamics/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace denslab {

void InvariantSeries::append(double time, const std::string& name, double value) {
  for (auto it = records_.rbegin(); it != records_.rend(); ++it)
    if (it->name == name) {
      if (!(time > it->time))
        throw std::invalid_argument("InvariantSeries: times must increase for '" + name + "'");
      break;
    }
  records_.push_back({time, name, value});
}

std::vector<std::string> InvariantSeries::names() const {
  std::vector<std::string> out;
  for (const Record& r : records_)
    if (std::find(out.begin(), out.end(), r.name) == out.end()) out.push_back(r.name);
  return out;
}

std::vector<double> InvariantSeries::values(const std::string& name) const {
  std::vector<double> out;
  for (const Record& r : records_)
    if (r.name == name) out.push_back(r.value);
  return out;
}

std::vector<double> InvariantSeries::times(const std::string& name) const {
  std::vector<double> out;
  for (const Record& r : records_)
    if (r.name == name) out.push_back(r.time);
  return out;
}

double InvariantSeries::relative_drift(const std::string& name, double floor) const {
  const std::vector<double> v = values(name);
  if (v.empty()) throw std::invalid_argument("InvariantSeries: no records for '" + name + "'");
  const double scale = std::max(std::abs(v.front()), floor);
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return d / scale;
}

void InvariantSeries::write_csv(std::ostream& out) const {
  out << "time,name,value\n";
  char buf[64];
  for (const Record& r : records_) {
    std::snprintf(buf, sizeof buf, "%.17g", r.time);
    out << buf << ',' << r.name << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.value);
    out << buf << '\n';
  }
}

void InvariantSeries::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out);
}

}  // namespace denslab
