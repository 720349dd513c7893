#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcam/energy.hpp"
#include "pcam/geometry.hpp"
#include "pcam/kernel.hpp"
#include "pcam/params.hpp"

namespace pcam {

enum class CaseId {
  A1, A2, A3, A4, A5, A6,
  B1, B2, B3,
  D1, D2, D3, D4, D5,
  E1, E2, E3, E4, E5, E6, E7,
};

const char* case_name(CaseId id);
CaseId case_from_name(const std::string& name);
std::vector<CaseId> all_cases();

/// Parameters of one canonical construction. Rectangles are placed as
/// `l` rows by `m` cols (l <= m, long axis horizontal); strips are full-width
/// row bands.
struct CaseParams {
  CaseId id = CaseId::A1;
  TorusGeometry geom;
  int l = 2, m = 2;    // primary rectangle
  int l2 = 0, m2 = 0;  // inner (B) or second (D) rectangle
  int band1 = 0, band2 = 0, band3 = 0;  // strip widths for E cases
};

/// Ordered path with per-step energy bookkeeping; recomputable from states.
struct PathTrace {
  ModelParams params;
  std::vector<SpinConfig> states;
  std::vector<double> step_delta;
  std::vector<double> step_trans_energy;  // H(w_k) + Delta(w_k, w_{k+1})
  double height = 0.0;                    // max step transition energy

  static PathTrace from_states(const ModelParams& p, std::vector<SpinConfig> states);
  std::string to_json(const std::string& label = "") const;
  std::string storyboard() const;
};

/// Ceiling formula V*_case at the given parameterization.
double declared_case_ceiling(const CaseParams& cp, double h);

/// Achieved maximum predicted by the per-case energy bookkeeping (equals the
/// declared ceiling except for E2/E3, whose canonical branch tops out at 2h).
double expected_achieved_ceiling(const CaseParams& cp, double h);

PathTrace build_reference_path(const ModelParams& p, const CaseParams& cp);

struct CaseReport {
  CaseParams params;
  PathTrace trace;
  double declared_ceiling = 0.0;
  double expected_achieved = 0.0;
  double achieved_ceiling = 0.0;  // max transition energy - H(start)
  int achieving_step = -1;
  double energy_drop = 0.0;       // H(start) - H(end)
  bool start_is_trap = false;
  bool end_is_trap = false;
  bool terminal_matches = false;
  bool achieved_matches_expected = false;
  bool ceiling_ok = false;  // achieved <= declared
  bool drop_ok = false;     // strictly positive
  bool pass = false;

  std::string summary_line() const;
};

CaseReport verify_case_ceiling(const ModelParams& p, const CaseParams& cp);

/// Canonical parameterization of every case at this field strength.
std::vector<CaseParams> default_case_suite(TorusGeometry rect_geom, TorusGeometry strip_geom,
                                           double h);

/// States of an explicit nucleation route minus -> chessboard -> plus built
/// from droplet-growth dynamics; feeds the restricted communication-height
/// upper bound.
std::vector<SpinConfig> nucleation_states(const ModelParams& p, TorusGeometry g);

}  // namespace pcam
