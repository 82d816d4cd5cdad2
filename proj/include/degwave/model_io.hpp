#ifndef DEGWAVE_MODEL_IO_HPP
#define DEGWAVE_MODEL_IO_HPP

#include <string>

#include "degwave/kinetics.hpp"

namespace degwave {

// Model definition files are flat `key = value` text with '#' comments.
// Recognized keys:
//   m, D, r
//   birth.kind  = nicholson | mackeyglass | agestructured | linear | tabulated
//   birth.p, birth.a, birth.q, birth.gamma, birth.r
//   birth.table = "u0:v0, u1:v1, ..."
//   death.kind  = linear | quadratic | power | tabulated
//   death.delta, death.k
//   death.table = "u0:v0, u1:v1, ..."
// Unknown keys are rejected.
KineticsSpec parse_model_text(const std::string& text);
KineticsSpec load_model_file(const std::string& path);

std::string model_to_text(const KineticsSpec& spec);

} // namespace degwave

#endif
