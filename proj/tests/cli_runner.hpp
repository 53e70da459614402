#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace lvc::testing {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the lvc binary through the shell with stdout/stderr captured to files
/// in `scratch`. `env` is prepended verbatim, e.g. "LVC_THREADS=2".
inline CliResult run_cli(const std::filesystem::path& scratch, const std::string& args,
                         const std::string& env = "") {
  const auto out = scratch / "cli.stdout";
  const auto err = scratch / "cli.stderr";
  const std::string cmd = (env.empty() ? "" : env + " ") + "'" + LVC_CLI_PATH + "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(out), read(err)};
}

}  // namespace lvc::testing
