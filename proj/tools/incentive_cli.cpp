#include "incentive/cli.hpp"

int main(int argc, char** argv) { return incentive::cli::run(argc, argv); }
