#include "riskclt/commands.hpp"

int main(int argc, char** argv) { return riskclt::cli::run(argc, argv); }
