#include "kstab/report.hpp"

int main(int argc, char** argv) { return kstab::cli::run(argc, argv); }
