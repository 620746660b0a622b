#pragma once

namespace limitset {

// Process-wide numeric tolerances. Set once at startup (the CLI may tighten
// them); read-only afterwards, so concurrent readers need no locking.
struct Tolerances {
  double wall = 1e-9;   // chamber-wall proximity, relative to |v|
  double gp = 1e-9;     // flag transversality margin
  double hull = 1e-8;   // slice-coordinate hull membership
  double sort = 1e-12;  // AVector descending check
  double sum = 1e-9;    // AVector zero-sum check, relative to max(1,|v|)
};

const Tolerances& tolerances();

// Returns false (and leaves the state unchanged) if any override is looser
// than the default.
bool set_tolerances(const Tolerances& t);

}  // namespace limitset
