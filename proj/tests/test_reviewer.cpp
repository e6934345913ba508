#include <atomic>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "doctest.h"
#include "referee/errors.hpp"
#include "referee/reviewer.hpp"
#include "test_support.hpp"

using namespace referee;
using nlohmann::json;
using test_support::TempDir;
using test_support::fails_with;
using test_support::make_paper;
using test_support::paper_text;
using test_support::stub_path;

namespace {

Prompt prompt_of(const std::string& text) {
  Prompt p;
  p.id = "prompt-t";
  p.text = text;
  return p;
}

// A canonical valid wire response for `paper_id`, with optional tweaks.
json valid_response() {
  json r;
  r["type"] = "review_result";
  r["scores"] = {{"relevance", 0.5}, {"contribution", 0.5}, {"soundness", 0.5},
                 {"clarity", 0.5},   {"responsibility", 0.5}};
  r["overall"] = 0.5;
  r["text"] = "A fine paper.";
  return r;
}

Err parse_error_code(const json& response) {
  try {
    parse_wire_response(response.dump(), "paper-1", "test");
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected parse_wire_response to throw");
}

}  // namespace

TEST_SUITE("reviewer") {

TEST_CASE("render_justification lists each criterion with two decimals") {
  std::vector<CriterionScore> scores;
  for (const char* name : kCriterionNames) {
    scores.push_back(make_criterion_score(name, {{"only", 0.97}}));
  }
  std::string text = render_justification(scores);
  CHECK(text.find("relevance: 0.97 (alignment between prompt and content).") !=
        std::string::npos);
  CHECK(text.find("responsibility: 0.97 (respectful, non-toxic language).") !=
        std::string::npos);
  CHECK(text.find("relevance") < text.find("responsibility"));  // canonical order
}

TEST_CASE("random reviews are deterministic and order-independent") {
  SurveyPaper a = make_paper("paper-a", "T", "Some abstract text.");
  SurveyPaper b = make_paper("paper-b", "T", "Other abstract text.");
  Review a1 = random_review(7, a);
  Review b1 = random_review(7, b);
  Review a2 = random_review(7, a);  // replay after reviewing b
  REQUIRE(a1.scores.size() == 5);
  CHECK(a1.overall == a2.overall);
  CHECK(a1.justification == a2.justification);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a1.scores[i].value == a2.scores[i].value);
  }
  CHECK(a1.overall != b1.overall);  // different papers, different draws
  CHECK(random_review(8, a).overall != a1.overall);
}

TEST_CASE("random review scores stay in range and average near one half") {
  double sum = 0.0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    SurveyPaper p = make_paper("paper-" + std::to_string(i), "T", "Words here.");
    Review r = random_review(1, p);
    for (const auto& score : r.scores) {
      for (const auto& [name, v] : score.sub_scores) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
      }
    }
    CHECK_FALSE(r.justification.empty());
    sum += r.overall;
  }
  CHECK(sum / n > 0.45);
  CHECK(sum / n < 0.55);
}

TEST_CASE("builtin reviewer resolves originals through the prompt") {
  Providers providers{test_support::fixture_config()};
  OriginalIndex originals;
  originals.add(make_paper("source-1", "Original title", "Original abstract.", {},
                           {"[1] Doe, J. (2020). Some reference. KDD."}));

  SurveyPaper paper = make_paper("paper-1", "Survey title", "Survey abstract about things.",
                                 {{"Conclusion", "Closing words about things."}},
                                 {"[1] Doe, J. (2020). Some reference. KDD."});
  Prompt with_source = prompt_of("Write about things.");
  with_source.source_paper_id = "source-1";

  BuiltinReviewer reviewer(&providers, &originals);
  Review r = reviewer.review(paper, with_source);
  CHECK(r.reviewer_id == "builtin");
  CHECK(r.criterion("contribution").sub_scores.at("coverage") == 1.0);
  CHECK(r.overall == doctest::Approx(aggregate_score(r.scores)));
  CHECK_FALSE(r.justification.empty());

  Prompt bad_source = prompt_of("Write about things.");
  bad_source.source_paper_id = "source-absent";
  CHECK(fails_with(Err::MissingOriginal, [&] { reviewer.review(paper, bad_source); }));

  BuiltinReviewer no_index(&providers, nullptr);
  Review without = no_index.review(paper, with_source);
  CHECK(without.criterion("contribution").sub_scores.count("coverage") == 0);
}

TEST_CASE("label oracle reads provenance, inverted oracle flips it") {
  SurveyPaper clean = make_paper("paper-1", "T", "Clean abstract.");
  SurveyPaper corrupted = parse_paper(paper_text(
      "paper-1--clarity", "", "T", {{"Abstract", "Damaged abstract."}}, {},
      {{"corrupted_from", "paper-1"}, {"target", "clarity"}, {"seed", "42"}}));

  LabelOracleReviewer oracle;
  CHECK(oracle.review(clean, prompt_of("x")).overall == doctest::Approx(0.9));
  CHECK(oracle.review(corrupted, prompt_of("x")).overall == doctest::Approx(0.1));

  LabelOracleReviewer inverted(true);
  CHECK(inverted.review(clean, prompt_of("x")).overall == doctest::Approx(0.1));
  CHECK(inverted.review(corrupted, prompt_of("x")).overall == doctest::Approx(0.9));
}

TEST_CASE("wire requests carry the paper but never provenance labels") {
  SurveyPaper corrupted = parse_paper(paper_text(
      "paper-1--clarity", "prompt-1", "A Title", {{"Abstract", "Body."}, {"End", "Tail."}},
      {"[1] Doe, J. (2020). Ref. KDD."},
      {{"corrupted_from", "paper-1"}, {"target", "clarity"}, {"seed", "42"}}));
  std::string line = wire_request(corrupted, prompt_of("The prompt."));
  CHECK(line.find('\n') == std::string::npos);  // single line
  json parsed = json::parse(line);
  CHECK(parsed["type"] == "review");
  CHECK(parsed["paper"]["id"] == "paper-1--clarity");
  CHECK(parsed["paper"]["title"] == "A Title");
  CHECK(parsed["paper"]["sections"].size() == 1);
  CHECK(parsed["paper"]["references"][0] == "[1] Doe, J. (2020). Ref. KDD.");
  CHECK(parsed["prompt"] == "The prompt.");
  CHECK(line.find("corrupted_from") == std::string::npos);
  CHECK(line.find("target") == std::string::npos);
  CHECK(line.find("seed") == std::string::npos);
}

TEST_CASE("valid wire responses parse into a Review") {
  Review r = parse_wire_response(valid_response().dump(), "paper-1", "cmd:stub");
  CHECK(r.paper_id == "paper-1");
  CHECK(r.reviewer_id == "cmd:stub");
  CHECK(r.overall == 0.5);
  CHECK(r.scores.size() == 5);
  CHECK(r.criterion("clarity").value == 0.5);
  CHECK(r.justification == "A fine paper.");
}

TEST_CASE("overall within the tolerance of the mean is accepted") {
  json r = valid_response();
  r["overall"] = 0.5 + 5e-7;
  CHECK(parse_wire_response(r.dump(), "p", "t").overall == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("wire violations are rejected with precise codes, never clamped") {
  json missing = valid_response();
  missing["scores"].erase("soundness");
  CHECK(parse_error_code(missing) == Err::ProtocolViolation);

  json extra = valid_response();
  extra["scores"]["novelty"] = 0.5;
  CHECK(parse_error_code(extra) == Err::ProtocolViolation);

  json high = valid_response();
  high["scores"]["clarity"] = 1.5;
  CHECK(parse_error_code(high) == Err::ScoreOutOfRange);

  json low = valid_response();
  low["scores"]["clarity"] = -0.01;
  CHECK(parse_error_code(low) == Err::ScoreOutOfRange);

  json overall_out = valid_response();
  overall_out["overall"] = 1.2;
  CHECK(parse_error_code(overall_out) == Err::ScoreOutOfRange);

  json drifted = valid_response();
  drifted["overall"] = 0.6;  // inconsistent with the criterion mean
  CHECK(parse_error_code(drifted) == Err::ProtocolViolation);

  json no_text = valid_response();
  no_text["text"] = "";
  CHECK(parse_error_code(no_text) == Err::ProtocolViolation);

  json wrong_type = valid_response();
  wrong_type["type"] = "unexpected";
  CHECK(parse_error_code(wrong_type) == Err::ProtocolViolation);

  json non_number = valid_response();
  non_number["scores"]["clarity"] = "high";
  CHECK(parse_error_code(non_number) == Err::ProtocolViolation);

  CHECK(fails_with(Err::ProtocolViolation,
                   [] { parse_wire_response("this is not json", "p", "t"); }));
  CHECK(fails_with(Err::ProtocolViolation, [] { parse_wire_response("[1,2]", "p", "t"); }));
}

TEST_CASE("reviewer selectors parse into handles") {
  CHECK(ReviewerHandle::parse("builtin").kind == ReviewerHandle::Kind::builtin);

  ReviewerHandle random = ReviewerHandle::parse("random:123");
  CHECK(random.kind == ReviewerHandle::Kind::random);
  CHECK(random.seed == 123);

  ReviewerHandle cmd = ReviewerHandle::parse("cmd:python3 stub.py --flag");
  CHECK(cmd.kind == ReviewerHandle::Kind::command);
  CHECK(cmd.target == "python3 stub.py --flag");

  ReviewerHandle http = ReviewerHandle::parse("http://host:1234/review");
  CHECK(http.kind == ReviewerHandle::Kind::http);
  CHECK(http.target == "http://host:1234/review");
  CHECK(ReviewerHandle::parse("https://host/review").kind == ReviewerHandle::Kind::http);

  CHECK(fails_with(Err::ConfigError, [] { ReviewerHandle::parse("unknown"); }));
  CHECK(fails_with(Err::ConfigError, [] { ReviewerHandle::parse("random:notanumber"); }));
  CHECK(fails_with(Err::ConfigError, [] { ReviewerHandle::parse("cmd:"); }));
  CHECK(fails_with(Err::ConfigError, [] { ReviewerHandle::parse(""); }));
}

TEST_CASE("external process reviewer round-trips through the stub") {
  ExternalProcessReviewer reviewer(stub_path() + " ok");
  CHECK_FALSE(reviewer.concurrent_safe());
  SurveyPaper paper = make_paper("paper-1", "T", "Abstract.");
  Review r = reviewer.review(paper, prompt_of("x"));
  CHECK(r.paper_id == "paper-1");
  CHECK(r.scores.size() == 5);
  CHECK(r.overall >= 0.0);
  CHECK(r.overall <= 1.0);
  // The stub derives scores from the paper id: same input, same review.
  Review again = reviewer.review(paper, prompt_of("x"));
  CHECK(again.overall == r.overall);
}

TEST_CASE("external reviewer failure taxonomy") {
  SurveyPaper paper = make_paper("paper-1", "T", "Abstract.");
  Prompt prompt = prompt_of("x");

  ExternalProcessReviewer missing(stub_path() + " missing");
  CHECK(fails_with(Err::ProtocolViolation, [&] { missing.review(paper, prompt); }));

  ExternalProcessReviewer range(stub_path() + " range");
  CHECK(fails_with(Err::ScoreOutOfRange, [&] { range.review(paper, prompt); }));

  ExternalProcessReviewer badmean(stub_path() + " badmean");
  CHECK(fails_with(Err::ProtocolViolation, [&] { badmean.review(paper, prompt); }));

  ExternalProcessReviewer invalid(stub_path() + " invalid");
  CHECK(fails_with(Err::ProtocolViolation, [&] { invalid.review(paper, prompt); }));

  ExternalProcessReviewer crash(stub_path() + " crash");
  CHECK(fails_with(Err::ProtocolViolation, [&] { crash.review(paper, prompt); }));

  ExternalProcessReviewer hang(stub_path() + " hang", std::chrono::milliseconds(300));
  auto start = std::chrono::steady_clock::now();
  CHECK(fails_with(Err::ReviewerTimeout, [&] { hang.review(paper, prompt); }));
  auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(elapsed < std::chrono::seconds(5));  // killed, not waited out
}

TEST_CASE("one child serves consecutive requests and respawns after failure") {
  // The flaky stub fails every third request *of one process*: failures on
  // calls 3 and 6 prove both persistence (1-2, 4-5 share a child) and the
  // respawn after a failure (4 starts a fresh child).
  ExternalProcessReviewer reviewer(stub_path() + " flaky");
  Prompt prompt = prompt_of("x");
  int failures = 0;
  std::vector<int> failed_calls;
  for (int call = 1; call <= 6; ++call) {
    SurveyPaper paper = make_paper("paper-" + std::to_string(call), "T", "Abstract.");
    try {
      reviewer.review(paper, prompt);
    } catch (const Error& e) {
      CHECK(e.code() == Err::ProtocolViolation);
      ++failures;
      failed_calls.push_back(call);
    }
  }
  CHECK(failures == 2);
  REQUIRE(failed_calls.size() == 2);
  CHECK(failed_calls[0] == 3);
  CHECK(failed_calls[1] == 6);
}

TEST_CASE("http reviewer posts the request and validates the response") {
  httplib::Server server;
  std::atomic<bool> ready{false};
  int port = 0;
  server.Post("/review", [](const httplib::Request& req, httplib::Response& res) {
    json request = json::parse(req.body);
    json response = valid_response();
    if (request["paper"]["id"] == "paper-bad") response["scores"]["clarity"] = 2.0;
    res.set_content(response.dump(), "application/json");
  });
  std::thread thread([&] {
    port = server.bind_to_any_port("127.0.0.1");
    ready.store(true);
    server.listen_after_bind();
  });
  while (!ready.load()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  server.wait_until_ready();
  std::string endpoint = "http://127.0.0.1:" + std::to_string(port) + "/review";

  HttpReviewer reviewer(endpoint);
  SurveyPaper paper = make_paper("paper-1", "T", "Abstract.");
  Review r = reviewer.review(paper, prompt_of("x"));
  CHECK(r.overall == 0.5);

  SurveyPaper bad = make_paper("paper-bad", "T", "Abstract.");
  CHECK(fails_with(Err::ScoreOutOfRange, [&] { reviewer.review(bad, prompt_of("x")); }));

  HttpReviewer nowhere("http://127.0.0.1:9/review", std::chrono::milliseconds(500));
  CHECK(fails_with(Err::RemoteUnavailable, [&] { nowhere.review(paper, prompt_of("x")); }));

  server.stop();
  thread.join();
}

TEST_CASE("make_reviewer builds every kind") {
  Providers providers{ProviderConfig{}};
  CHECK(make_reviewer(ReviewerHandle::parse("builtin"), &providers, nullptr)->id() == "builtin");
  CHECK(make_reviewer(ReviewerHandle::parse("random:5"), nullptr, nullptr)->id() == "random:5");
  auto cmd = make_reviewer(ReviewerHandle::parse("cmd:true"), nullptr, nullptr);
  CHECK(cmd->id() == "cmd:true");
  CHECK_FALSE(cmd->concurrent_safe());
  CHECK(make_reviewer(ReviewerHandle::parse("http://x/y"), nullptr, nullptr)->id() == "http://x/y");
}

}  // TEST_SUITE
