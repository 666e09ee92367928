#include "slitdiff/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return slitdiff::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
