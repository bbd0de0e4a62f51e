#include "fiberspin/cli.hpp"

#include <csignal>
#include <iostream>

namespace {

extern "C" void on_interrupt(int) { fiberspin::cli::interrupt_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_interrupt);
  return fiberspin::cli::run(argc, argv, std::cout, std::cerr);
}
