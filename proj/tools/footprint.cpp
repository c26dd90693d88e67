#include <string>
#include <vector>

#include "pfp/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return pfp::cli::run(args);
}
