#include "commands.hpp"

int main(int argc, char** argv) { return laas::cli::run(argc, argv); }
