#include "chainscope/cli.hpp"

int main(int argc, char** argv) { return chainscope::cli::run(argc, argv); }
