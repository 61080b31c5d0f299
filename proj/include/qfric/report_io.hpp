#pragma once
// Serialization of force reports and nonadditivity curves to CSV and JSON,
// plus the matching readers used for round-trip checks. Floats are written
// with 17 significant digits so that reading a file back reproduces the
// original doubles bit-for-bit; undefined ratios (NaN) become JSON null.

#include <string>
#include <vector>

#include "qfric/forces.hpp"

namespace qfric {

// Column order: z_a,w,v,f_int,f_rad,f_int_add,f_rad_add,eta_int,eta_rad,
// rad_sigma_term,rad_spin_term.
std::string reports_to_csv(const std::vector<ForceReport>& rows);
std::string reports_to_json(const std::vector<ForceReport>& rows);
std::vector<ForceReport> reports_from_csv(const std::string& text);
std::vector<ForceReport> reports_from_json(const std::string& text);

struct Fig3Row {
  double z_a_over_w = 0.0;
  double eta_rad = 0.0;
  double lorentz_model = 0.0;
};

// Column order: z_a_over_w,eta_rad,lorentz_model.
std::string fig3_to_csv(const std::vector<Fig3Row>& rows);
std::string fig3_to_json(const std::vector<Fig3Row>& rows);
std::vector<Fig3Row> fig3_from_csv(const std::string& text);
std::vector<Fig3Row> fig3_from_json(const std::string& text);

class ReportIOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qfric
