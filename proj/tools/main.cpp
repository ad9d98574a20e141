#include "cli.hpp"

int main(int argc, char** argv) { return autophage::cli::run(argc, argv); }
