#include "pinnosc/cli.hpp"

int main(int argc, char** argv) { return pinnosc::cli::run_cli(argc, argv); }
