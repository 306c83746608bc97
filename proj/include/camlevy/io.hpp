#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "camlevy/sigma_est.hpp"
#include "camlevy/stats.hpp"
#include "camlevy/trajectory.hpp"

namespace camlevy::io {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Writes `t,y` rows and a sidecar with the same stem and a .json extension
/// holding model, params, seed, stream, dt, warnings and the truncation flag.
void write_trajectory(const std::filesystem::path& csv, const Trajectory& traj);
nlohmann::json trajectory_metadata(const Trajectory& traj);

/// Reads the `y` column (or the last column) of a CSV with a header row.
std::vector<double> read_series(const std::filesystem::path& csv);

/// lag,re,im,q25,q75: medians of the real and imaginary parts, and the
/// quartiles of the real part, with the lag expressed in time units.
void write_acd(const std::filesystem::path& csv,
               std::span<const stats::AcdSummary> rows, double lag_dt);
/// k,re,im
void write_cf(const std::filesystem::path& csv, std::span<const double> k,
              std::span<const std::complex<double>> values);
/// bin_lo,bin_hi,density
void write_histogram(const std::filesystem::path& csv,
                     const stats::Histogram& hist);

nlohmann::json sigma_report(const sigma_est::SigmaEstimate& est);

struct SweepRow {
  double eps = 0.0;
  double Delta = 0.0;
  double sigma_Y = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};
/// eps,Delta,sigma_Y,q25,q75
void write_sweep(const std::filesystem::path& csv,
                 std::span<const SweepRow> rows);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace camlevy::io
