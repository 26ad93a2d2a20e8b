#include "atomdeconv/cli.hpp"

int
main(int argc, char** argv)
{
  return atomdeconv::cli::run(std::vector<std::string>(argv, argv + argc));
}
