// Test workload: allocates and touches a private buffer, holds it, exits.
//
//   alloc_helper <megabytes> <hold_seconds> [exit_code]
//
// Prints "ready" on stdout once every page has been touched.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <thread>

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <megabytes> <hold_seconds> [exit_code]\n", argv[0]);
    return 64;
  }
  const std::size_t bytes = std::strtoull(argv[1], nullptr, 10) * 1'000'000ULL;
  const double hold = std::strtod(argv[2], nullptr);
  const int code = argc > 3 ? std::atoi(argv[3]) : 0;

  auto buffer = std::make_unique<unsigned char[]>(bytes);
  std::memset(buffer.get(), 0x5a, bytes);
  std::printf("ready\n");
  std::fflush(stdout);

  std::this_thread::sleep_for(std::chrono::duration<double>(hold));
  // Keep the buffer observable until the end.
  volatile unsigned char sink = bytes ? buffer[bytes - 1] : 0;
  (void)sink;
  return code;
}
