#include <benchmark/benchmark.h>

// libbenchmark_main.a ships LTO bytecode from a different compiler release.
BENCHMARK_MAIN();
