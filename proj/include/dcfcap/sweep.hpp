#pragma once

#include <string>
#include <vector>

#include "dcfcap/config.hpp"
#include "dcfcap/csv.hpp"

namespace dcfcap {

/// One or more grid points failed; failures carries one annotated message
/// per failing point.
class SweepError : public std::runtime_error {
  public:
    SweepError(const std::string& what, std::vector<std::string> failures)
        : std::runtime_error(what), failures(std::move(failures)) {}
    std::vector<std::string> failures;
};

/// Sweeps the configured axis, solving the model at every grid point
/// (plus the ideal-channel baseline; plus simulation columns with
/// with_sim). Rows are ordered by grid index whatever the execution order.
Csv run_sweep(const RunConfig& base, bool with_sim);

const std::vector<std::string>& figure_ids();

/// Builds the dataset behind one of the canned figures (fig3..fig7); the
/// recipe pins its own axis and fixed parameters, everything else comes
/// from the base config.
Csv figure(const std::string& id, const RunConfig& base, bool with_sim);

}  // namespace dcfcap
