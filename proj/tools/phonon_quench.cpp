#include "phonon/driver.hpp"

int main(int argc, char** argv) { return phonon::cli_main(argc, argv); }
