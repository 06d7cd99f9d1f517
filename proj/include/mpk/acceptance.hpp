#ifndef MPK_ACCEPTANCE_HPP
#define MPK_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mpk {

struct AcceptanceResult {
  struct Item {
    std::string name;
    bool pass;
    double value;
    double threshold;
    std::string detail;
  };
  std::vector<Item> items;

  int failed() const {
    int n = 0;
    for (const auto& i : items)
      if (!i.pass) ++n;
    return n;
  }
};

// Runs every acceptance criterion, printing one pass/fail line per item.
AcceptanceResult runAcceptance(std::ostream& os);

}  // namespace mpk

#endif
