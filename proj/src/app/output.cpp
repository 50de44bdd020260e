// Copyright 2026 The ioncycle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "app/output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ioncycle/hilbert.hpp"

namespace ioncycle::app {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_banner(const std::string& name, std::uint64_t seed, const std::string& extra) {
  std::string s = std::string("# ioncycle ") + kVersion + " name=" + name + " seed=" + std::to_string(seed);
  if (!extra.empty()) s += " " + extra;
  return s + "\n";
}

std::string trace_csv(const SimulationTrace& trace, const std::string& banner) {
  std::ostringstream o;
  o << banner << "time_s,stroke_label,cycle_index,p_D,mean_n,entropy_nats,ergotropy_hw,mutual_info_nats\n";
  for (const auto& s : trace.series)
    o << number(s.time) << ',' << s.stroke << ',' << s.cycle << ',' << number(s.p_D) << ',' << number(s.mean_n) << ','
      << number(s.entropy_nats) << ',' << number(s.ergotropy_hw) << ',' << number(s.mutual_info_nats) << '\n';
  return o.str();
}

std::string boundaries_csv(const SimulationTrace& trace, const std::string& banner) {
  std::ostringstream o;
  o << banner << "cycle,point,p_D,mean_n\n";
  for (const auto& b : trace.boundaries)
    o << b.cycle << ',' << to_char(b.point) << ',' << number(excited_population(b.state)) << ','
      << number(mean_phonon(b.state)) << '\n';
  return o.str();
}

std::string distribution_csv(const PhononDistribution& p, const std::string& banner) {
  std::ostringstream o;
  o << banner << "n,p_n,sigma\n";
  for (Index n = 0; n < p.size(); ++n)
    o << n << ',' << number(p[n]) << ',' << number(p.sigma() ? (*p.sigma())(n) : 0.0) << '\n';
  return o.str();
}

std::string scan_csv(const RabiScan& scan, const std::string& banner) {
  std::ostringstream o;
  o << banner << "time_s,p_S,sigma_p,shots\n";
  for (Index i = 0; i < scan.times.size(); ++i)
    o << number(scan.times(i)) << ',' << number(scan.p_S(i)) << ',' << number(scan.sigma_p(i)) << ','
      << scan.shots_per_point << '\n';
  return o.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorKind::schema, "CSV column '" + name + "' missing");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::schema, "cannot open " + path.string());
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorKind::schema, path.string() + ":" + std::to_string(line_no) + ": wrong number of cells");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
      if (r.ec != std::errc() || r.ptr != c.data() + c.size())
        throw Error(ErrorKind::schema, path.string() + ":" + std::to_string(line_no) + ": '" + c + "' is not a number");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorKind::schema, path.string() + " has no header");
  return t;
}

RabiScan read_scan(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t ct = t.column("time_s"), cp = t.column("p_S"), cs = t.column("sigma_p"), cn = t.column("shots");
  RabiScan s{Eigen::VectorXd(Index(t.rows.size())), Eigen::VectorXd(Index(t.rows.size())),
             Eigen::VectorXd(Index(t.rows.size())), 0};
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    s.times(Index(i)) = t.rows[i][ct];
    s.p_S(Index(i)) = t.rows[i][cp];
    s.sigma_p(Index(i)) = t.rows[i][cs];
    const int shots = int(t.rows[i][cn]);
    if (i > 0 && shots != s.shots_per_point) throw Error(ErrorKind::schema, "shots differ between scan points");
    s.shots_per_point = shots;
  }
  s.validate();
  return s;
}

PhononDistribution read_distribution(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t cn = t.column("n"), cp = t.column("p_n");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(Index(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double n = t.rows[i][cn];
    if (n != double(i)) throw Error(ErrorKind::schema, "distribution rows must list n = 0, 1, 2, ... in order");
    p(Index(i)) = t.rows[i][cp];
  }
  try {
    return PhononDistribution(p);
  } catch (const Error& e) {
    throw Error(ErrorKind::schema, path.string() + ": " + e.what());
  }
}

}  // namespace ioncycle::app
