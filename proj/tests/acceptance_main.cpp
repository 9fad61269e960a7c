#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "sphereppw/acceptance.hpp"

using namespace sphereppw;

int main(int argc, char** argv) {
  acceptance::Options opts;
  bool verbose = false;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "-v")) verbose = true;
    else if (!std::strcmp(argv[i], "--h") && i + 1 < argc) opts.h = std::atof(argv[++i]);
    else only.push_back(std::atoi(argv[i]));
  }
  if (only.empty())
    for (int id = 1; id <= acceptance::criterion_count; ++id) only.push_back(id);

  int failed = 0;
  for (int id : only) {
    const auto r = acceptance::run_criterion(id, opts);
    std::printf("[%s] criterion %2d: %-36s (%zu checks, %.1fs)\n", r.pass() ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.checks.size(), r.seconds);
    for (const auto& c : r.checks)
      if (verbose || !c.pass) std::printf("       %s %s: %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
    std::fflush(stdout);
    if (!r.pass()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(only.size()) - failed, only.size());
  return failed == 0 ? 0 : 1;
}
