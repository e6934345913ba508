// Minimal wire-protocol peer for exercising the external reviewer path.
// Reads one JSON request per line on stdin and answers on stdout. The first
// argument selects a behavior:
//   ok       well-formed responses with deterministic scores (default)
//   missing  omits the clarity criterion
//   range    reports a relevance score of 1.5
//   badmean  reports an overall that is not the criterion mean
//   invalid  prints a line that is not JSON
//   hang     reads the request and never answers
//   crash    exits without answering
//   flaky    misbehaves (invalid) on every third request, ok otherwise

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

namespace {

using nlohmann::json;

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double unit_score(const std::string& paper_id, const char* criterion) {
  std::uint64_t h = fnv(paper_id + "|" + criterion);
  return static_cast<double>(h % 10000) / 9999.0;
}

}  // namespace

int main(int argc, char** argv) {
  std::string mode = argc > 1 ? argv[1] : "ok";
  const char* names[5] = {"relevance", "contribution", "soundness", "clarity", "responsibility"};

  std::string line;
  std::uint64_t requests = 0;
  while (std::getline(std::cin, line)) {
    ++requests;

    if (mode == "hang") {
      std::this_thread::sleep_for(std::chrono::hours(24));
      continue;
    }
    if (mode == "crash") return 1;
    if (mode == "invalid" || (mode == "flaky" && requests % 3 == 0)) {
      std::cout << "this is not a protocol response" << std::endl;
      continue;
    }

    json request = json::parse(line, nullptr, false);
    std::string paper_id = "unknown";
    if (request.is_object() && request.contains("paper") && request["paper"].is_object() &&
        request["paper"].contains("id")) {
      paper_id = request["paper"]["id"].get<std::string>();
    }

    json scores = json::object();
    double sum = 0.0;
    for (const char* name : names) {
      double v = unit_score(paper_id, name);
      if (mode == "range" && std::string(name) == "relevance") v = 1.5;
      scores[name] = v;
      sum += v;
    }
    if (mode == "missing") scores.erase("clarity");

    double overall = sum / 5.0;
    if (mode == "badmean") overall = overall < 0.5 ? overall + 0.25 : overall - 0.25;

    json response;
    response["type"] = "review_result";
    response["scores"] = std::move(scores);
    response["overall"] = overall;
    response["text"] = "stub review of " + paper_id;
    std::cout << response.dump() << std::endl;
  }
  return 0;
}
