#include "utm/config.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <numbers>
#include <string>

namespace utm {

namespace {
std::atomic<int> g_jobs{0};
}

double default_indent(double L) { return std::min(0.1, std::numbers::pi / (4.0 * L)); }

int max_jobs() {
  const int set = g_jobs.load();
  if (set > 0) return set;
  if (const char* env = std::getenv("UTM_HEAT_JOBS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return 1;
}

void set_max_jobs(int jobs) { g_jobs = std::max(0, jobs); }

}  // namespace utm
