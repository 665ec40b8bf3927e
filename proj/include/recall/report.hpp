#pragma once

#include <map>
#include <string>

#include "recall/rational.hpp"
#include "recall/strategy.hpp"

namespace recall {

// Candidate profile + concept + requested eps + residuals + certificate kind.
struct EquilibriumReport {
  std::string concept_name;                         // "cdt", "cdt-pgd", "edt", "nash"
  Profile profile;                             // candidate (float mode)
  Rat eps = Rat(0);                            // requested tolerance
  double residual = 0.0;                       // concept-specific worst residual
  std::string certificate;                     // e.g. "fixed-point-residual"
  bool converged = false;
  long iterations = 0;
  std::map<std::string, std::string> details;  // constants, bars, resolutions
};

}  // namespace recall
