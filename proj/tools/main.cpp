#include "homprobe/cli.hpp"

int main(int argc, char** argv) { return homprobe::cli::run(argc, argv); }
