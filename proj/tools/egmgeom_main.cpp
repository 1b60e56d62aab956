#include "egmgeom/cli.hpp"

int main(int argc, char** argv) { return egmgeom::cli_dispatch(argc, argv); }
