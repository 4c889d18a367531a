#include "stokeseg/runner.hpp"

int main(int argc, char** argv) { return stokeseg::run_cli(argc, argv); }
