/* SPDX-License-Identifier: Apache-2.0 */

#include <iostream>
#include <string>
#include <vector>

#include "s4dt0/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return s4dt0::cli::run(args, std::cout, std::cerr);
}
