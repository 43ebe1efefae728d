#pragma once

// Runs reference_endpoint.py as a child process for the lifetime of the object.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace tessera::testing {

class EndpointProcess {
 public:
  explicit EndpointProcess(const std::string& data_file = {}) {
    int fds[2];
    if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
    pid_ = fork();
    if (pid_ < 0) throw std::runtime_error("fork failed");
    if (pid_ == 0) {
      dup2(fds[1], STDOUT_FILENO);
      close(fds[0]);
      close(fds[1]);
      std::vector<std::string> args = {TESSERA_PYTHON, TESSERA_REFERENCE_ENDPOINT, "--port", "0"};
      if (!data_file.empty()) {
        args.push_back("--data");
        args.push_back(data_file);
      }
      std::vector<char*> argv;
      for (auto& a : args) argv.push_back(a.data());
      argv.push_back(nullptr);
      execv(argv[0], argv.data());
      _exit(127);
    }
    close(fds[1]);
    FILE* out = fdopen(fds[0], "r");
    char line[128] = {0};
    const bool ok = out != nullptr && std::fgets(line, sizeof line, out) != nullptr;
    if (out != nullptr) std::fclose(out);
    int port = 0;
    if (!ok || std::sscanf(line, "PORT %d", &port) != 1) {
      stop();
      throw std::runtime_error("reference endpoint did not start (python3 with rdflib required)");
    }
    base_ = "http://127.0.0.1:" + std::to_string(port);
  }

  ~EndpointProcess() { stop(); }
  EndpointProcess(const EndpointProcess&) = delete;
  EndpointProcess& operator=(const EndpointProcess&) = delete;

  std::string query_url() const { return base_ + "/query"; }
  std::string update_url() const { return base_ + "/update"; }

 private:
  void stop() {
    if (pid_ > 0) {
      kill(pid_, SIGTERM);
      waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
  }

  pid_t pid_ = -1;
  std::string base_;
};

}  // namespace tessera::testing
