#include "rqbm/cli/app.hpp"

int main(int argc, char** argv) { return rqbm::cli::run(argc, argv); }
