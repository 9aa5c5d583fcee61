#include <iostream>

#include "ouspread/app.hpp"

int main(int argc, char** argv) { return ouspread::run_app(argc, argv, std::cout, std::cerr); }
