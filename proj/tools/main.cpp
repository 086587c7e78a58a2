#include "cli.hpp"

int main(int argc, char** argv) { return optdesign::cli::main_entry(argc, argv); }
