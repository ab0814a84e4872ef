#pragma once

#include <cstdint>
#include <vector>

#include "slowline/circuit.hpp"

namespace slowline {

// Seed of realization `index` in the stream identified by `seed` (SplitMix64 mixing).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

struct disorder_sample {
  array_spec spec;
  std::vector<double> cell_frequencies;  // drawn resonance frequencies (rad/s)
  int redraws = 0;                       // draws rejected for being non-positive
};

// Draws every cell frequency from N(omega0, sigma^2) and rescales that cell's
// inductance by (omega0 / f)^2; capacitances are untouched.
disorder_sample sample_disordered(const array_spec& spec, double sigma, std::uint64_t seed);

struct extinction_problem {
  array_spec spec;
  std::vector<double> sigma_over_j;  // J = omega0 cg / (2 c0)
  int n_realizations = 500;
  std::uint64_t seed = 0;
  double band_window = 0.5;
  int grid_points = 801;
  int bootstrap_samples = 200;
  int threads = 1;
};

struct disorder_ensemble_result {
  std::vector<double> sigma_over_j;
  std::vector<double> mean_extinction_db;
  std::vector<double> std_extinction_db;
  std::vector<double> stderr_db;  // bootstrap standard error of the mean
  int n_realizations = 0;
  std::uint64_t seed = 0;
  int redraws = 0;
};

// Mean |S21| in dB over the central band window, averaged over realizations.
disorder_ensemble_result extinction_curve(const extinction_problem& problem);

// Linearly interpolated sigma/J where the mean extinction first drops below level_db; NaN if never.
double extinction_crossing(const disorder_ensemble_result& r, double level_db);

struct fsr_report {
  std::vector<double> mode_freqs;
  double delta_fsr = 0.0;  // standard deviation of adjacent spacings (rad/s)
};

inline constexpr double peak_prominence_db = 0.005;

// Ripple maxima of |S21| inside [omega_lo, omega_hi], located by quadratic interpolation.
std::vector<double> find_ripple_peaks(const two_port_response& response, double omega_lo, double omega_hi,
                                      double prominence_db = peak_prominence_db);

// Uses the central half of the interior passband of `cell`.
fsr_report fsr_variance(const two_port_response& response, const unit_cell& cell);
fsr_report fsr_variance(const two_port_response& response, double omega_lo, double omega_hi);

// Response on the grid used for mode extraction: central half band, grid_points samples.
two_port_response fsr_response(const array_spec& spec, int grid_points);

struct calibration_problem {
  array_spec spec;
  std::vector<double> sigma;  // rad/s, ascending
  int n_realizations = 500;
  std::uint64_t seed = 0;
  int grid_points = 4001;
  int threads = 1;
};

struct calibration_result {
  std::vector<double> sigma;
  std::vector<double> mean_delta_fsr;
  std::vector<int> valid_realizations;
  bool monotone = true;         // table strictly increasing over the whole grid
  std::size_t usable = 0;       // inversion restricted to sigma[0 .. usable-1]
  double sigma_estimate = 0.0;  // rad/s
  bool clamped = false;         // measured value outside the usable table
};

calibration_result calibration_table(const calibration_problem& problem);
void invert_calibration(calibration_result& table, double measured_delta_fsr);
calibration_result calibrate_sigma(double measured_delta_fsr, const calibration_problem& problem);

}  // namespace slowline
