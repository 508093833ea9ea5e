#pragma once

// Reproducible experiments behind the command-line tool. Each run returns an
// ExperimentReport (CSV tables, charts and budget checks); nothing here
// prints or touches the file system.
//
// Config file layout (all keys optional):
//   seed = 7
//   out = results
//   [profile]    p, eps, beta
//   [problem]    domain, phi, grids, eps_list
//   [sweep]      dims, deltas, trials, general_dims, general_trials, basic, general
//   [identities] residuals, slack, slack_p, slack_eps, slack3d, grids3d, young
//   [solve]      tol, max_iterations, write_field
//   [estimate]   p_list, square, square_domain
//   [boundary]   samples, grisvard, normal_fields, normal_fields_count,
//                capacity, capacity_grid, rearrangement, step_functions,
//                k_quantity, k_radii, k_centers, rho_list, k_rho_radius,
//                trace, trace_grid, trace_radii, trace_spread
// Switches (basic, general, residuals, ...) are integers; 0 disables a part.
// Grid sizes N mean h = 1/N. Domains: disk[:R], square[:half], annulus[:ri:ro].

#include <cstdint>
#include <string>
#include <vector>

#include "plab/config.hpp"
#include "plab/grid.hpp"
#include "plab/report.hpp"

namespace plab {

struct ExperimentConfig {
  std::string experiment;
  double p = 2.0;
  double eps = 1e-3;
  double beta = 0.0;
  std::string domain = "disk";
  std::string phi = "sin_sin";
  std::vector<int> grids;        // strictly increasing
  std::vector<double> eps_list;  // strictly decreasing
  std::uint64_t seed = 1;
  std::string out_dir = "results";
  /// Raw key-value entries, including the experiment-specific sections.
  KeyValueConfig extra;

  /// Reads the common keys; missing grids / eps_list take the experiment's
  /// defaults.
  static ExperimentConfig from_config(const std::string& experiment, const KeyValueConfig& cfg);
  /// Throws InvalidInput on an inconsistent configuration.
  void validate() const;
};

/// Grid over a named domain with spacing 1/n.
DomainPtr make_domain(const std::string& spec, int n);

struct EstimateRecord {
  std::string domain;
  double p = 0.0;
  double h = 0.0;
  double eps = 0.0;
  double du_w12 = 0.0;
  double dphi_w12 = 0.0;
  double dphi_lp = 0.0;
  double ratio = 0.0;     // du_w12 / (dphi_w12 + dphi_lp + eps)
  double d2_ratio = 0.0;  // ∫|D²u|² / ∫|D²phi|²
  int newton_steps = 0;
  double runtime = 0.0;   // seconds; never written to CSV
};

ExperimentReport run_verify_cordes(const ExperimentConfig& config);
ExperimentReport run_verify_identities(const ExperimentConfig& config);
ExperimentReport run_solve(const ExperimentConfig& config);
ExperimentReport run_global_estimate(const ExperimentConfig& config, std::vector<EstimateRecord>* records = nullptr);
ExperimentReport run_boundary_suite(const ExperimentConfig& config);

/// Dispatch by subcommand name (verify-cordes, verify-identities, solve,
/// global-estimate, boundary-suite).
ExperimentReport run_experiment(const ExperimentConfig& config);
std::vector<std::string> experiment_names();

}  // namespace plab
