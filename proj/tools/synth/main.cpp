// Writes a synthetic eye dataset in the layout `hmdiris prepare` expects.
#include <iostream>

#include "CLI11.hpp"
#include "hmdiris/error.hpp"
#include "hmdiris/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic eye-image dataset generator"};
  std::string out;
  hmdiris::SyntheticDatasetSpec spec;
  std::size_t workers = 0;
  app.add_option("--out", out, "Dataset root to create")->required();
  app.add_option("--identities", spec.identities, "Number of identities");
  app.add_option("--frames", spec.frames_per_identity, "Captures per identity");
  app.add_option("--width", spec.width, "Image width");
  app.add_option("--height", spec.height, "Image height");
  app.add_option("--seed", spec.seed, "Generator seed");
  app.add_option("--blink", spec.blink_probability, "Probability of a closed eye per frame");
  app.add_option("--workers", workers, "Worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  try {
    hmdiris::write_synthetic_dataset(out, spec, workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "wrote " << spec.identities * spec.frames_per_identity << " captures to " << out
            << "\n";
  return 0;
}
