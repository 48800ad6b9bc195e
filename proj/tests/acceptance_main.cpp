#include <cstring>
#include <iostream>
#include <string>

#include "homflow/acceptance.hpp"
#include "homflow/errors.hpp"

int main(int argc, char** argv) {
  std::string calibration;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--calibration") == 0 && i + 1 < argc) calibration = argv[++i];
  try {
    const auto cal = calibration.empty() ? homflow::Calibration{} : homflow::Calibration::load(calibration);
    const auto results = homflow::run_acceptance({}, cal);
    homflow::print_results(std::cout, results);
    for (const auto& r : results)
      if (!r.pass) return 1;
    return 0;
  } catch (const homflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
