#include <iostream>

#include "mpk/acceptance.hpp"

int main() {
  mpk::AcceptanceResult r = mpk::runAcceptance(std::cout);
  return r.failed() == 0 ? 0 : 1;
}
