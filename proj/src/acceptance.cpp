#include "mpk/acceptance.hpp"

#include <ostream>

namespace mpk {

AcceptanceResult runAcceptance(std::ostream& os) {
  AcceptanceResult r;
  os << "acceptance suite not yet wired\n";
  return r;
}

}  // namespace mpk
