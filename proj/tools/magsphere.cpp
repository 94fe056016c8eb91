#include <magsphere/cli.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    return magsphere::run_cli(argc, argv, std::cout, std::cerr);
}
