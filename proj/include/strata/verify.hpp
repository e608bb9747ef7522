#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "strata/report.hpp"

namespace strata {

// Verification suites. Each is deterministic for a fixed RunConfig and seeds its
// random streams with derive_seed(config.seed, <suite name>).
Report verify_algebra(const RunConfig& c);
Report verify_operators(const RunConfig& c);
Report verify_series(const RunConfig& c);
Report verify_sv(const RunConfig& c);
Report verify_fourier(const RunConfig& c);
// eigenvalue sweep over config.eps; claims on refinement, monotonicity and counts
Report verify_spectrum(const RunConfig& c);

const std::vector<std::string>& suite_names();  // algebra operators series sv fourier spectrum
Report run_suite(const std::string& name, const RunConfig& c);

// claims as CSV: suite,id,pass,detail
void write_claims_csv(std::ostream& os, const std::vector<Report>& reports);

// Command line entry point: 0 all claims pass, 1 some claim fails, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace strata
