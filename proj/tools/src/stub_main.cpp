// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

// Loopback chat-completions stub used to record replay caches and for
// smoke tests. Prints the bound port on stdout.

#include "glossmt/corpus.hpp"
#include "glossmt/error.hpp"
#include "glossmt_tools/stub.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"chat-completions stub server", "glossmt-stub"};
  int port = 0;
  std::string rules_path;
  glossmt::tools::StubOptions options;
  app.add_option("--port", port, "port on 127.0.0.1; 0 picks one");
  app.add_option("--rules", rules_path, "JSON list of {contains, response}");
  app.add_option("--fail-first", options.fail_first,
                 "answer the first N chat requests with --fail-status");
  app.add_option("--fail-status", options.fail_status, "status for failures");
  app.add_option("--score", options.score, "score returned by /score");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!rules_path.empty()) {
      options.rules =
          glossmt::tools::parse_stub_rules(glossmt::read_file(rules_path));
    }
    glossmt::tools::StubServer server(std::move(options));
    std::cout << server.start(port) << std::endl;
    server.wait();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
