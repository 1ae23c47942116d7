#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace cli {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the command line tool with `args`, capturing stdout. Stderr is dropped.
inline Result run(const std::string& args) {
  const std::string cmd = std::string(MONOMETRIC_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string fixture(const std::string& name) {
  return std::string(MONOMETRIC_FIXTURES) + "/" + name;
}

}  // namespace cli
