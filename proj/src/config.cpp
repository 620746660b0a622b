#include "limitset/config.hpp"

namespace limitset {

namespace {
Tolerances& state() {
  static Tolerances t;
  return t;
}
}  // namespace

const Tolerances& tolerances() { return state(); }

bool set_tolerances(const Tolerances& t) {
  const Tolerances d;
  if (t.wall > d.wall || t.gp > d.gp || t.hull > d.hull || t.sort > d.sort || t.sum > d.sum)
    return false;
  if (t.wall <= 0 || t.gp <= 0 || t.hull <= 0 || t.sort <= 0 || t.sum <= 0) return false;
  state() = t;
  return true;
}

}  // namespace limitset
