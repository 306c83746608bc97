#include "camlevy/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "camlevy/errors.hpp"

namespace camlevy::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw DomainError("io: cannot write " + path.string());
  return out;
}

nlohmann::json quartiles_json(const stats::Quartiles& q) {
  return {{"q25", q.q25}, {"median", q.median}, {"q75", q.q75}};
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json trajectory_metadata(const Trajectory& traj) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [name, value] : traj.params) params[name] = value;
  return {{"model", traj.model},
          {"params", params},
          {"master_seed", traj.master_seed},
          {"stream_index", traj.stream_index},
          {"t0", traj.t0},
          {"dt", traj.dt},
          {"samples", traj.values.size()},
          {"truncated", traj.truncated},
          {"warnings", traj.warnings}};
}

void write_trajectory(const std::filesystem::path& csv, const Trajectory& traj) {
  auto out = open_out(csv);
  out << "t,y\n";
  for (std::size_t n = 0; n < traj.values.size(); ++n) {
    out << format_number(traj.time(n)) << ',' << format_number(traj.values[n])
        << '\n';
  }
  std::filesystem::path sidecar = csv;
  sidecar.replace_extension(".json");
  write_json(sidecar, trajectory_metadata(traj));
}

std::vector<double> read_series(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw DomainError("io: cannot read " + csv.string());
  std::string line;
  if (!std::getline(in, line)) return {};
  std::size_t column = 0;
  std::size_t columns = 0;
  {
    std::stringstream header(line);
    std::string name;
    bool found = false;
    while (std::getline(header, name, ',')) {
      if (name == "y") {
        column = columns;
        found = true;
      }
      ++columns;
    }
    if (!found) column = columns - 1;
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (std::size_t c = 0; c <= column; ++c) {
      if (!std::getline(row, cell, ',')) {
        throw DomainError("io: short row in " + csv.string());
      }
    }
    // strtod rather than stod: subnormal values are data, not errors.
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
      throw DomainError("io: bad number '" + cell + "' in " + csv.string());
    }
    values.push_back(v);
  }
  return values;
}

void write_acd(const std::filesystem::path& csv,
               std::span<const stats::AcdSummary> rows, double lag_dt) {
  auto out = open_out(csv);
  out << "lag,re,im,q25,q75\n";
  for (const auto& r : rows) {
    out << format_number(lag_dt * static_cast<double>(r.lag)) << ','
        << format_number(r.re.median) << ',' << format_number(r.im.median)
        << ',' << format_number(r.re.q25) << ',' << format_number(r.re.q75)
        << '\n';
  }
}

void write_cf(const std::filesystem::path& csv, std::span<const double> k,
              std::span<const std::complex<double>> values) {
  auto out = open_out(csv);
  out << "k,re,im\n";
  for (std::size_t i = 0; i < k.size() && i < values.size(); ++i) {
    out << format_number(k[i]) << ',' << format_number(values[i].real()) << ','
        << format_number(values[i].imag()) << '\n';
  }
}

void write_histogram(const std::filesystem::path& csv,
                     const stats::Histogram& hist) {
  auto out = open_out(csv);
  out << "bin_lo,bin_hi,density\n";
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    out << format_number(hist.edges[i]) << ',' << format_number(hist.edges[i + 1])
        << ',' << format_number(hist.density[i]) << '\n';
  }
}

nlohmann::json sigma_report(const sigma_est::SigmaEstimate& est) {
  const auto& c = est.config;
  return {{"config",
           {{"eps", c.eps},
            {"T", c.T},
            {"Delta", c.Delta},
            {"n_samples", c.n_samples},
            {"dt", c.dt},
            {"repeats", c.repeats},
            {"l_min", c.fit.l_min},
            {"l_max", c.fit.l_max},
            {"n_grid", c.fit.n_grid},
            {"min_delta_ratio", c.min_delta_ratio},
            {"min_partitions", c.min_partitions},
            {"master_seed", c.master_seed},
            {"workers", c.workers}}},
          {"n_partitions", est.n_partitions},
          {"sigma_S", est.sigma_S},
          {"sigma_Y", est.sigma_Y},
          {"Sigma", est.Sigma},
          {"residual", est.residual},
          {"sigma_Y_quartiles", quartiles_json(est.sigma_Y_quartiles)},
          {"Sigma_quartiles", quartiles_json(est.Sigma_quartiles)},
          {"sigma_S_repeats", est.sigma_S_repeats}};
}

void write_sweep(const std::filesystem::path& csv,
                 std::span<const SweepRow> rows) {
  auto out = open_out(csv);
  out << "eps,Delta,sigma_Y,q25,q75\n";
  for (const auto& r : rows) {
    out << format_number(r.eps) << ',' << format_number(r.Delta) << ','
        << format_number(r.sigma_Y) << ',' << format_number(r.q25) << ','
        << format_number(r.q75) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("io: cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("io: invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace camlevy::io
