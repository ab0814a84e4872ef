#pragma once

#include <vector>

#include "slowline/circuit.hpp"

namespace slowline {

struct taper_problem {
  array_spec base;
  int n_modified = 2;
  double band_window = 0.5;  // fraction of the passband, centred
  bool symmetric = true;
  int max_iterations = 2000;
  int grid_points = 801;
  // Additional starting points: coupling capacitances (F) ordered from the port inward,
  // n_modified values per boundary (twice that when not symmetric).
  std::vector<std::vector<double>> extra_seeds;

  void validate() const;
};

struct taper_report {
  array_spec spec;
  std::vector<double> couplings;  // optimised coupling capacitances, port side first
  double ripple_db = 0.0;
  double initial_ripple_db = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log;  // best ripple after each accepted iteration
};

// Grid of `points` frequencies over the central `band_window` of the interior passband.
std::vector<double> ripple_grid(const unit_cell& cell, double band_window, int points = 801);

// Peak-to-peak |S21| in dB over the central band window.
double ripple(const array_spec& spec, double band_window, int points = 801);

// Rebuilds the outer n cells at each end as boundary cells with the given couplings
// (port side first); shunts keep each cell at the interior total capacitance c0 + 2 cg.
array_spec apply_taper(const array_spec& base, int n_modified, const std::vector<double>& couplings_in,
                       const std::vector<double>& couplings_out);

// Analytic starting guess: port coupling that sets the end-cell decay rate to 2J,
// geometrically interpolated toward cg.
std::vector<double> analytic_taper_guess(const array_spec& base, int n_modified);

taper_report optimize_taper(const taper_problem& problem);

}  // namespace slowline
