#include <iostream>

#include "qcforge/cli.hpp"

int main(int argc, char** argv) { return qcforge::run(argc, argv, std::cout, std::cerr); }
