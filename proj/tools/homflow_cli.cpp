#include <iostream>

#include "homflow/commands.hpp"

int main(int argc, char** argv) { return homflow::main_entry(argc, argv, std::cout, std::cerr); }
