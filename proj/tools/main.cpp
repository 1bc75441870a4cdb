#include <hdnewton/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return hdnewton::run_cli(argc, argv, std::cout, std::cerr); }
