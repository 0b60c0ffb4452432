#pragma once

#include "glab/certificate.hpp"
#include "glab/config.hpp"
#include "glab/odometer.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace glab::cli {

const std::vector<std::string>& subcommands();

/// 0 for pass and vacuous, 1 for fail.
int exit_code(Verdict v);

/// Runs one auditor. Throws InvalidInput (or another glab::Error) on bad input.
Certificate run_subcommand(const std::string& name, const ExperimentConfig& config);

/// One-screen summary: property, scale, verdict, extremal witness.
std::string report(const Certificate& c);

/// Reads the [chain] section: group = Z with moduli, or a free group with either
/// builtin = symmetric (levels) or levelN_mode / levelN_a / levelN_b / levelN_degree.
QuotientChain chain_from_config(const ExperimentConfig& config);

/// Full command line entry point; returns the process exit status.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace glab::cli
