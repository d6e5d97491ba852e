#include <iostream>

#include "oscint/cli.hpp"

int main(int argc, char** argv) {
  oscint::cli::RunConfig cfg;
  if (const auto code = oscint::cli::parse_run_config(argc, argv, cfg, std::cout, std::cerr)) return *code;
  return oscint::cli::run(cfg, std::cout, std::cerr);
}
