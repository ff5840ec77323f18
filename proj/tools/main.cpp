#include <spemb/cli.hpp>

int main(int argc, char** argv) { return spemb::cli::run(argc, argv); }
