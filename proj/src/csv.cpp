#include "qclock/csv.hpp"

#include <ostream>

#include "qclock/format.hpp"

namespace qclock {

const char* const kTrajectoryHeader =
    "t,mean_T,var_T,D,D_excess,mean_Lambda,var_Lambda,mean_HC,var_HC,bound,norm,energy,"
    "purity_E,alpha,beta,mode,flags";

std::string trajectory_row(const DiagnosticsRecord& r) {
    std::string row;
    row.reserve(320);
    row += fmt17(r.t);
    row += ',';
    row += fmt17(r.mean_T);
    row += ',';
    row += fmt17(r.var_T);
    row += ',';
    row += fmt17(r.degradation);
    row += ',';
    row += fmt17(r.degradation_excess);
    row += ',';
    row += fmt17(r.mean_lambda);
    row += ',';
    row += fmt17(r.var_lambda);
    row += ',';
    row += fmt17(r.mean_hc);
    row += ',';
    row += fmt17(r.var_hc);
    row += ',';
    row += fmt17(r.bound);
    row += ',';
    row += fmt17(r.norm);
    row += ',';
    row += fmt17(r.energy);
    row += ',';
    row += fmt17(r.purity_engine);
    row += ',';
    row += fmt17(r.alpha);
    row += ',';
    row += fmt17(r.beta);
    row += ',';
    row += r.mode;
    row += ',';
    row += r.flags;
    return row;
}

void write_trajectory_csv(const std::vector<DiagnosticsRecord>& records, std::ostream& out) {
    out << kTrajectoryHeader << '\n';
    for (const auto& r : records) out << trajectory_row(r) << '\n';
}

}  // namespace qclock
