#include <iostream>

#include "rps/cli.hpp"

int main(int argc, char** argv)
{
    return rps::cli::main(argc, argv, std::cout, std::cerr);
}
