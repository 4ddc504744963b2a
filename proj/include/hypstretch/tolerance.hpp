#pragma once

// Global absolute tolerance used for point comparisons and invariant checks.
// Override at runtime with the HYPSTRETCH_TOL environment variable.
namespace hyp {

double base_tol();

}
