#include <string>
#include <vector>

#include "instrind/cli.hpp"

int main(int argc, char** argv) {
  return instrind::cli::run_command(std::vector<std::string>(argv, argv + argc));
}
