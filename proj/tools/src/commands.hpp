#pragma once

#include "scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace phonon_chill::cli {

// Command-line overrides applied on top of the scenario's run block.
struct Overrides {
  std::optional<std::size_t> fock;
  std::optional<double> tol;
  std::optional<double> omega_min, omega_max;
  std::optional<std::size_t> omega_steps;
  std::optional<double> t_final;
  std::optional<unsigned> threads;
};

void apply_overrides(Scenario& s, const Overrides& o);

// CSV cell formatting: scientific, 10 significant digits.
std::string csv_number(double x);

// Writes via a temporary file in the same directory and renames it in place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// Each returns the list of files written into `out`.
std::vector<std::filesystem::path> run_spectrum(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> run_coefficients(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> run_evolve(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> run_steadystate(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> run_robust(const Scenario& s, const std::filesystem::path& out);
std::vector<std::filesystem::path> run_compare(const Scenario& s, const std::filesystem::path& out);

// Full command dispatch; returns the process exit status (0 ok, 2 config
// error, 3 numerical failure) and prints an error JSON on failure.
int run_cli(int argc, char** argv);

}  // namespace phonon_chill::cli
