// Runs every acceptance criterion through the shared library and prints one
// line per criterion. Exit status is nonzero if any criterion fails.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "hypergodic/hypergodic.h"

int main(int argc, char** argv) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  const char* only = nullptr;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--workers") workers = std::atoi(argv[i + 1]);
    else if (flag == "--only") only = argv[i + 1];
  }
  hyg_report* rep = nullptr;
  if (hyg_verify(40, 1, workers, only, &rep) != HYG_OK) {
    std::fprintf(stderr, "verify failed: %s\n", hyg_last_error());
    return 2;
  }
  int failed = 0;
  for (size_t i = 0; i < hyg_report_verdict_count(rep); ++i) {
    const char* id = nullptr;
    const char* detail = nullptr;
    hyg_verdict v = HYG_PASS;
    double secs = 0;
    hyg_report_verdict(rep, i, &id, &v, &detail, &secs);
    const char* tag = v == HYG_PASS ? "PASS" : v == HYG_FAIL ? "FAIL" : "SKIP";
    if (v == HYG_FAIL) ++failed;
    std::printf("%s %s (%.1fs) %s\n", tag, id, secs, detail);
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  hyg_report_free(rep);
  return failed == 0 ? 0 : 1;
}
