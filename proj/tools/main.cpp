#include "cavbranch/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return cavbranch::cli::run(argc, argv, std::cout, std::cerr);
}
