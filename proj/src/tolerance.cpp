#include "hypstretch/tolerance.hpp"

#include <cstdlib>
#include <string>

namespace hyp {

double base_tol() {
  static const double tol = [] {
    if (const char* env = std::getenv("HYPSTRETCH_TOL")) {
      try {
        double v = std::stod(env);
        if (v > 0) return v;
      } catch (...) {
      }
    }
    return 1e-9;
  }();
  return tol;
}

}  // namespace hyp
