#include <cstdlib>
#include <iostream>

#include <unistd.h>

#include "ecd_cli.hpp"

int main(int argc, char** argv) {
  ecd::cli::Context ctx{std::cout, std::cerr};
  ctx.interactive = ::isatty(STDIN_FILENO) != 0 && ::isatty(STDOUT_FILENO) != 0;
  if (const char* dir = std::getenv("ECD_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    ctx.default_out_dir = dir;
  }
  return ecd::cli::run(argc, argv, ctx);
}
