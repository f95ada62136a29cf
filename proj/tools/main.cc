#include <iostream>
#include <string>
#include <vector>

#include "xsym/app.hh"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return xsym::app::run(args, std::cout, std::cerr);
}
