#include <iostream>
#include <string>
#include <vector>

#include "cnnlstm/cli.hpp"

int main(int argc, char** argv) {
  return cnnlstm::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
