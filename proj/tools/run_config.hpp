#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace incomm::cli {

/// Bad flags, bad config values or inconsistent requests (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSource {
  std::string builtin;  // empty: taken from the config file
  std::map<std::string, double> overrides;
  std::string config_path;

  bool operator==(const ModelSource&) const = default;
};

struct EnergyGrid {
  bool use_default = true;  // 401 points over 98% of the scaled window
  double min = 0.0;         // eV
  double max = 0.0;         // eV
  int count = 401;

  bool operator==(const EnergyGrid&) const = default;
};

/// Everything a run depends on. Lengths given on the command line (r, r lists,
/// c_r) are in units of the sheet lattice constant a.
struct RunConfig {
  std::string command;
  ModelSource model;
  double r = 0.0;
  int p = 0;
  int n_disc = 1;
  EnergyGrid energy;
  std::string output;
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
  std::string kernel = "jackson";

  // ldos / converge
  int sheet = 1;
  std::string orbital;                // empty = first orbital of the sheet
  std::array<double, 2> shift{0, 0};  // fractional coordinates in the opposite cell
  int grid = 0;                       // ldos: N x N shift grid instead of one shift
  std::string moments_path;
  std::string matrix_path;
  std::string sites_path;

  // converge
  std::string axis;
  std::vector<double> r_list;
  std::vector<int> p_list;
  std::vector<int> ndisc_list;
  double c_r = 0.0;
  double c_n = 0.0;
  double epsilon = 0.0;

  // equidist
  std::array<int, 2> mode{1, 0};
  int bins = 16;

  bool operator==(const RunConfig&) const = default;
};

/// One-line provenance header: "# incommdos {json}".
std::string format_header(const RunConfig& config);
/// Inverse of format_header(); throws UsageError on malformed input.
RunConfig parse_header(const std::string& line);

/// Keys of the [run] section of a config file, as seen by apply_run_section().
struct RunSection {
  std::map<std::string, std::string> values;
};

/// Reads the [run] section of an INI file (empty when absent).
RunSection read_run_section(std::istream& in);
RunSection read_run_section_file(const std::string& path);

/// Applies [run] values to `config`; `skip` lists keys already fixed on the command line.
void apply_run_section(const RunSection& section, RunConfig& config,
                       const std::vector<std::string>& skip);

}  // namespace incomm::cli
