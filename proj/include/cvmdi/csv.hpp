#pragma once

#include <ostream>
#include <string>

#include "cvmdi/scan.hpp"
#include "cvmdi/simulate.hpp"

// CSV emission. Numeric fields carry 17 significant digits so files
// diff cleanly across runs and serve as regression anchors.

namespace cvmdi {

inline constexpr const char* kScanCsvHeader =
    "d_total_km,d_a_km,d_b_km,eps_a,eps_b,v_used,i_ab,eve_shannon,eve_holevo,key_rate,flags";

inline constexpr const char* kBatchCsvHeader =
    "q_enc_a,p_enc_a,q_enc_b,p_enc_b,q_broadcast,p_broadcast,q_recast_b,p_recast_b";

std::string format_full(double v);

void write_scan_csv(std::ostream& os, const ScanResult& result);
void write_batch_csv(std::ostream& os, const SampleBatch& batch);

} // namespace cvmdi
