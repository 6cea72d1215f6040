#pragma once
#include <string>

#include "metascope/doa.hpp"
#include "metascope/field.hpp"
#include "metascope/nearfield.hpp"

namespace metascope {

// Write text to path atomically: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& text);

// theta_deg,phi_deg,re,im,mag_db  (mag_db normalized so the peak is 0).
std::string pattern_to_csv(const FarFieldPattern& p);

// x_m,y_m,re,im  (y-major: all x for the first y, then the next y).
std::string plane_to_csv(const NearFieldPlane& p);

std::string df_trials_to_csv(const DfResult& r);
std::string df_rmse_to_csv(const DfResult& r);

}  // namespace metascope
