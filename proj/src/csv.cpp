#include "cvmdi/csv.hpp"

#include <algorithm>
#include <cstdio>

namespace cvmdi {

namespace {

std::string sanitize_flags(std::string flags) {
    std::replace(flags.begin(), flags.end(), ',', ';');
    std::replace(flags.begin(), flags.end(), '\n', ' ');
    return flags;
}

} // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_scan_csv(std::ostream& os, const ScanResult& result) {
    os << kScanCsvHeader << '\n';
    for (const ScanRow& r : result.rows) {
        os << format_full(r.d_total_km) << ',' << format_full(r.d_a_km) << ','
           << format_full(r.d_b_km) << ',' << format_full(r.eps_a) << ','
           << format_full(r.eps_b) << ',' << format_full(r.v_used) << ','
           << format_full(r.rate.mutual_info_ab) << ',' << format_full(r.rate.eve_shannon) << ','
           << format_full(r.rate.eve_holevo) << ',' << format_full(r.rate.key_rate) << ','
           << sanitize_flags(r.flags) << '\n';
    }
}

void write_batch_csv(std::ostream& os, const SampleBatch& batch) {
    os << kBatchCsvHeader << '\n';
    for (std::size_t i = 0; i < batch.count; ++i) {
        os << format_full(batch.q_enc_a[i]) << ',' << format_full(batch.p_enc_a[i]) << ','
           << format_full(batch.q_enc_b[i]) << ',' << format_full(batch.p_enc_b[i]) << ','
           << format_full(batch.q_broadcast[i]) << ',' << format_full(batch.p_broadcast[i]) << ','
           << format_full(batch.q_recast_b[i]) << ',' << format_full(batch.p_recast_b[i]) << '\n';
    }
}

} // namespace cvmdi
