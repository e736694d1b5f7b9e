#include "sel/cli/app.hpp"

int main(int argc, char** argv) { return sel::cli::dispatch(argc, argv); }
