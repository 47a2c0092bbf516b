#include "commands.hpp"

int main(int argc, char **argv) { return sqrs::cli::run(argc, argv); }
