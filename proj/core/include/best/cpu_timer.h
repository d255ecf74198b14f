#ifndef BEST_CPU_TIMER_H_
#define BEST_CPU_TIMER_H_

#include <time.h>

namespace best {

// CPU time consumed by the calling thread, in seconds. A metric call runs
// on one thread, so this isolates its cost even when other sources are
// being scored concurrently.
inline double ThreadCpuSeconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

class CpuTimer {
 public:
  CpuTimer() : start_(ThreadCpuSeconds()) {}
  double Elapsed() const { return ThreadCpuSeconds() - start_; }

 private:
  double start_;
};

}  // namespace best

#endif  // BEST_CPU_TIMER_H_
