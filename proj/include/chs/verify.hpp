// Self-contained invariant battery for the installed library: scalar graph
// identities, spectral operator identities, noise statistics, stepper laws.

#ifndef CHS_VERIFY_HPP
#define CHS_VERIFY_HPP

#include <string>

namespace chs {

// appends one "PASS/FAIL  label" line per check; returns overall success
bool run_verification(std::string& report);

}  // namespace chs

#endif
