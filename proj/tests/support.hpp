#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace otpforge::test_support {

inline std::string data_path(const std::string& rel) { return std::string(OTPFORGE_DATA_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct VectorCase {
  std::string key_hex;
  std::int64_t counter;
  std::string expected;
};

inline std::vector<VectorCase> load_vectors(const std::string& name) {
  std::ifstream in(data_path("vectors/" + name));
  if (!in) throw std::runtime_error("missing vector file " + name);
  std::vector<VectorCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    VectorCase c;
    ss >> c.key_hex >> c.counter >> c.expected;
    out.push_back(c);
  }
  return out;
}

}  // namespace otpforge::test_support
