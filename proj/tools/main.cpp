#include "commands.hpp"

int main(int argc, char** argv) { return textdetect::cli::run(argc, argv); }
