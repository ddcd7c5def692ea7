#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return ghostint::run(argc, argv, std::cout, std::cerr); }
