#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qclock/timeops.hpp"

namespace qclock {

// Stable trajectory schema; numbers carry 17 significant digits.
extern const char* const kTrajectoryHeader;

std::string trajectory_row(const DiagnosticsRecord& record);
void write_trajectory_csv(const std::vector<DiagnosticsRecord>& records, std::ostream& out);

}  // namespace qclock
