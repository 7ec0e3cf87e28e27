// Recomputes the outputs of every golden vector and prints them as one
// canonical JSON object keyed by file name. Usage: saphir_golden_replay <dir>

#include <iostream>

#include "../support/golden.hpp"

int main(int argc, char** argv) {
  namespace golden = saphir::testing::golden;
  if (argc != 2) {
    std::cerr << "usage: saphir_golden_replay <golden dir>\n";
    return 2;
  }
  saphir::Json out = saphir::Json::object();
  for (const char* file : golden::kFiles) {
    const saphir::Json json = golden::load(argv[1], file);
    if (!json.is_object()) {
      std::cerr << "missing " << file << "\n";
      return 2;
    }
    saphir::Json outputs = saphir::Json::array();
    for (const auto& v : json["vectors"]) outputs.push_back(golden::output_for(file, v["input"]));
    out[file] = std::move(outputs);
  }
  std::cout << saphir::canonical_dump(out);
  return 0;
}
