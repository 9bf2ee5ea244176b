#pragma once

#include <cstdint>
#include <thread>

#include "graphsl/errors.hpp"

namespace graphsl {

// Run-wide numeric knobs shared by the solvers and the CLI.
struct RunConfig {
  double lambda_max = 100.0;
  int trunc = 50;            // truncation L for spectral data / products
  int grid_n = 256;          // N: potential samples per edge are N+1
  double probe_height = 1.0; // Im lambda of the probe line
  double tol_root = 1e-12;   // bisection tolerance in rho
  double tol_residue = 1e-8; // two-radius residue self-consistency
  int workers = 0;           // 0 = hardware concurrency
  std::uint64_t seed = 1;    // test-potential generation

  void check() const {
    require(trunc >= 10, Errc::BadInput, "truncation L must be >= 10");
    require(grid_n >= 16, Errc::BadInput, "grid N must be >= 16");
    require(lambda_max > 0.0, Errc::BadInput, "lambda_max must be positive");
  }

  int worker_count() const {
    if (workers > 0) return workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }
};

}  // namespace graphsl
