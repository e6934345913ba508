#include "referee/reviewer.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <sstream>

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "referee/errors.hpp"
#include "referee/hashing.hpp"

namespace referee {
namespace {

using nlohmann::json;

const char* criterion_clause(const std::string& name) {
  if (name == "relevance") return "alignment between prompt and content";
  if (name == "contribution") return "coverage and summary alignment";
  if (name == "soundness") return "reference correctness and coherence";
  if (name == "clarity") return "readability and structure";
  if (name == "responsibility") return "respectful, non-toxic language";
  return "aggregate of sub-scores";
}

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> parts;
  std::istringstream in(command);
  std::string word;
  while (in >> word) parts.push_back(word);
  return parts;
}

double remaining_ms(std::chrono::steady_clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - std::chrono::steady_clock::now());
  return static_cast<double>(left.count());
}

// True when the fd became ready, false on deadline expiry.
bool wait_fd(int fd, short events, std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    double left = remaining_ms(deadline);
    if (left <= 0) return false;
    struct pollfd p;
    p.fd = fd;
    p.events = events;
    p.revents = 0;
    int rc = ::poll(&p, 1, static_cast<int>(std::min(left, 60000.0)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    if (rc > 0) return true;
  }
}

}  // namespace

const CriterionScore& Review::criterion(std::string_view name) const {
  for (const CriterionScore& s : scores) {
    if (s.name == name) return s;
  }
  fail(Err::MissingCriterion, "review has no criterion named " + std::string(name));
}

std::string render_justification(const std::vector<CriterionScore>& scores) {
  std::string out;
  for (const CriterionScore& s : scores) {
    char value[16];
    std::snprintf(value, sizeof(value), "%.2f", s.value);
    if (!out.empty()) out += " ";
    out += s.name + ": " + value + " (" + criterion_clause(s.name) + ").";
  }
  return out;
}

void OriginalIndex::add(SurveyPaper paper) {
  std::string id = paper.id;
  papers_.insert_or_assign(std::move(id), std::move(paper));
}

const SurveyPaper* OriginalIndex::find(const std::string& id) const {
  auto it = papers_.find(id);
  return it == papers_.end() ? nullptr : &it->second;
}

BuiltinReviewer::BuiltinReviewer(const Providers* providers, const OriginalIndex* originals)
    : providers_(providers), originals_(originals) {
  if (providers_ == nullptr) {
    fail(Err::ConfigError, "the builtin reviewer needs a provider facade");
  }
}

Review BuiltinReviewer::review(const SurveyPaper& paper, const Prompt& prompt) {
  const SurveyPaper* original = nullptr;
  if (!prompt.source_paper_id.empty() && originals_ != nullptr) {
    original = originals_->find(prompt.source_paper_id);
    if (original == nullptr) {
      fail(Err::MissingOriginal,
           "prompt " + prompt.id + " names an absent original: " + prompt.source_paper_id);
    }
  }

  Review r;
  r.paper_id = paper.id;
  r.reviewer_id = id();
  r.scores.push_back(score_relevance(*providers_, paper, prompt));
  r.scores.push_back(score_contribution(*providers_, paper, original));
  r.scores.push_back(score_soundness(*providers_, paper));
  r.scores.push_back(score_clarity(paper));
  r.scores.push_back(score_responsibility(*providers_, paper));
  r.overall = aggregate_score(r.scores);
  r.justification = render_justification(r.scores);
  return r;
}

Review random_review(std::uint64_t seed, const SurveyPaper& paper) {
  static const std::map<std::string, std::vector<std::string>> kSubNames = {
      {"relevance", {"title_abstract", "citations"}},
      {"contribution", {"coverage", "abstract_alignment", "conclusion_alignment"}},
      {"soundness", {"correctness", "citation_relevance", "interrelatedness"}},
      {"clarity", {"readability", "sentence_structure", "lexical_diversity"}},
      {"responsibility", {"non_toxicity"}},
  };
  static const char* kPhrases[] = {
      "The paper was assessed with uniformly drawn criterion scores.",
      "Scores for this paper come from the seeded baseline distribution.",
      "This review reflects the random baseline, not the paper content.",
      "Criterion values were sampled independently for this paper.",
  };

  Review r;
  r.paper_id = paper.id;
  r.reviewer_id = "random:" + std::to_string(seed);
  for (const char* name : kCriterionNames) {
    std::map<std::string, double> subs;
    for (const std::string& sub : kSubNames.at(name)) {
      SplitMixRng rng = keyed_rng(seed, {paper.id, name, sub});
      subs[sub] = rng.uniform();
    }
    r.scores.push_back(make_criterion_score(name, std::move(subs)));
  }
  r.overall = aggregate_score(r.scores);
  SplitMixRng phrase_rng = keyed_rng(seed, {paper.id, "justification"});
  r.justification = kPhrases[phrase_rng.below(std::size(kPhrases))];
  return r;
}

Review RandomReviewer::review(const SurveyPaper& paper, const Prompt&) {
  return random_review(seed_, paper);
}

Review LabelOracleReviewer::review(const SurveyPaper& paper, const Prompt&) {
  bool corrupted = paper.front_matter_extra.count("corrupted_from") > 0;
  double value = (corrupted != inverted_) ? 0.1 : 0.9;

  Review r;
  r.paper_id = paper.id;
  r.reviewer_id = id();
  for (const char* name : kCriterionNames) {
    r.scores.push_back(make_criterion_score(name, {{"label", value}}));
  }
  r.overall = aggregate_score(r.scores);
  r.justification = inverted_ ? "Scores invert the corruption provenance label."
                              : "Scores follow the corruption provenance label.";
  return r;
}

std::string wire_request(const SurveyPaper& paper, const Prompt& prompt) {
  json p;
  p["id"] = paper.id;
  if (!paper.prompt_id.empty()) p["prompt_id"] = paper.prompt_id;
  p["title"] = paper.title;
  p["abstract"] = paper.abstract;
  json sections = json::array();
  for (const Section& s : paper.sections) {
    sections.push_back({{"heading", s.heading}, {"body", s.body}});
  }
  p["sections"] = std::move(sections);
  json refs = json::array();
  for (const Reference& ref : paper.references) refs.push_back(ref.raw);
  p["references"] = std::move(refs);

  json request;
  request["type"] = "review";
  request["paper"] = std::move(p);
  request["prompt"] = prompt.text;
  return request.dump();
}

Review parse_wire_response(const std::string& line, const std::string& paper_id,
                           const std::string& reviewer_id) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Err::ProtocolViolation, "response is not a JSON object");
  }
  if (j.value("type", std::string()) != "review_result") {
    fail(Err::ProtocolViolation, "response type is not review_result");
  }
  if (!j.contains("scores") || !j["scores"].is_object()) {
    fail(Err::ProtocolViolation, "response lacks a scores object");
  }
  const json& scores = j["scores"];
  for (const auto& [name, value] : scores.items()) {
    bool canonical = std::any_of(std::begin(kCriterionNames), std::end(kCriterionNames),
                                 [&](const char* c) { return name == c; });
    if (!canonical) fail(Err::ProtocolViolation, "unexpected criterion in scores: " + name);
    (void)value;
  }

  Review r;
  r.paper_id = paper_id;
  r.reviewer_id = reviewer_id;
  double sum = 0.0;
  for (const char* name : kCriterionNames) {
    if (!scores.contains(name)) {
      fail(Err::ProtocolViolation, std::string("missing criterion score: ") + name);
    }
    if (!scores[name].is_number()) {
      fail(Err::ProtocolViolation, std::string("criterion score is not a number: ") + name);
    }
    double v = scores[name].get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(Err::ScoreOutOfRange, std::string(name) + " score outside [0,1]");
    }
    sum += v;
    r.scores.push_back(make_criterion_score(name, {{"score", v}}));
  }
  double mean = sum / 5.0;

  if (!j.contains("overall") || !j["overall"].is_number()) {
    fail(Err::ProtocolViolation, "response lacks a numeric overall");
  }
  double overall = j["overall"].get<double>();
  if (!(overall >= 0.0 && overall <= 1.0)) {
    fail(Err::ScoreOutOfRange, "overall score outside [0,1]");
  }
  if (std::fabs(overall - mean) > 1e-6) {
    fail(Err::ProtocolViolation, "overall disagrees with the criterion mean");
  }
  if (!j.contains("text") || !j["text"].is_string() || j["text"].get<std::string>().empty()) {
    fail(Err::ProtocolViolation, "response lacks a non-empty text");
  }
  r.overall = mean;
  r.justification = j["text"].get<std::string>();
  return r;
}

ExternalProcessReviewer::ExternalProcessReviewer(std::string command,
                                                 std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  if (split_command(command_).empty()) {
    fail(Err::ConfigError, "empty reviewer command");
  }
}

ExternalProcessReviewer::~ExternalProcessReviewer() { terminate_child(); }

void ExternalProcessReviewer::spawn() {
  // Writes to a dead child's pipe must come back as EPIPE, not SIGPIPE.
  static std::once_flag sigpipe_once;
  std::call_once(sigpipe_once, [] { std::signal(SIGPIPE, SIG_IGN); });

  std::vector<std::string> parts = split_command(command_);
  std::vector<char*> argv;
  argv.reserve(parts.size() + 1);
  for (std::string& p : parts) argv.push_back(p.data());
  argv.push_back(nullptr);

  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) fail(Err::IoError, "pipe: " + std::string(std::strerror(errno)));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    fail(Err::IoError, "pipe: " + std::string(std::strerror(errno)));
  }

  pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    fail(Err::IoError, "fork: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    ::dup2(to_child[0], 0);
    ::dup2(from_child[1], 1);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }

  ::close(to_child[0]);
  ::close(from_child[1]);
  pid_ = pid;
  stdin_fd_ = to_child[1];
  stdout_fd_ = from_child[0];
  buffer_.clear();
}

void ExternalProcessReviewer::terminate_child() {
  if (stdin_fd_ >= 0) {
    ::close(stdin_fd_);
    stdin_fd_ = -1;
  }
  if (stdout_fd_ >= 0) {
    ::close(stdout_fd_);
    stdout_fd_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    pid_t done = ::waitpid(pid_, &status, WNOHANG);
    if (done == 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
}

Review ExternalProcessReviewer::review(const SurveyPaper& paper, const Prompt& prompt) {
  if (pid_ < 0) spawn();

  auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::string request = wire_request(paper, prompt) + "\n";

  std::size_t off = 0;
  while (off < request.size()) {
    if (!wait_fd(stdin_fd_, POLLOUT, deadline)) {
      terminate_child();
      fail(Err::ReviewerTimeout, "reviewer did not accept the request within the deadline");
    }
    ssize_t k = ::write(stdin_fd_, request.data() + off, request.size() - off);
    if (k < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      int saved = errno;
      terminate_child();
      fail(Err::ProtocolViolation,
           "reviewer closed its stdin: " + std::string(std::strerror(saved)));
    }
    off += static_cast<std::size_t>(k);
  }

  std::string response;
  for (;;) {
    auto pos = buffer_.find('\n');
    if (pos != std::string::npos) {
      response = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      break;
    }
    if (!wait_fd(stdout_fd_, POLLIN, deadline)) {
      terminate_child();
      fail(Err::ReviewerTimeout, "reviewer did not reply within the deadline");
    }
    char chunk[4096];
    ssize_t k = ::read(stdout_fd_, chunk, sizeof(chunk));
    if (k < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      int saved = errno;
      terminate_child();
      fail(Err::ProtocolViolation,
           "reading from reviewer failed: " + std::string(std::strerror(saved)));
    }
    if (k == 0) {
      terminate_child();
      fail(Err::ProtocolViolation, "reviewer exited before replying");
    }
    buffer_.append(chunk, static_cast<std::size_t>(k));
  }

  try {
    return parse_wire_response(response, paper.id, id());
  } catch (...) {
    // The protocol state with this child is unknown; start fresh next time.
    terminate_child();
    throw;
  }
}

HttpReviewer::HttpReviewer(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
  if (endpoint_.find("://") == std::string::npos) {
    fail(Err::ConfigError, "reviewer endpoint is not an absolute URL: " + endpoint_);
  }
}

Review HttpReviewer::review(const SurveyPaper& paper, const Prompt& prompt) {
  auto split = endpoint_.find('/', endpoint_.find("://") + 3);
  std::string base = split == std::string::npos ? endpoint_ : endpoint_.substr(0, split);
  std::string path = split == std::string::npos ? "/" : endpoint_.substr(split);

  httplib::Client client(base);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);

  httplib::Result res = client.Post(path, wire_request(paper, prompt), "application/json");
  if (!res) {
    if (res.error() == httplib::Error::ConnectionTimeout || res.error() == httplib::Error::Read ||
        res.error() == httplib::Error::Write) {
      fail(Err::ReviewerTimeout, "reviewer endpoint did not reply within the deadline");
    }
    fail(Err::RemoteUnavailable,
         "reviewer endpoint unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    fail(Err::ProtocolViolation, "reviewer endpoint returned status " +
                                     std::to_string(res->status));
  }
  std::string body = res->body;
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
  return parse_wire_response(body, paper.id, id());
}

ReviewerHandle ReviewerHandle::parse(std::string_view spec) {
  ReviewerHandle h;
  if (spec == "builtin") {
    h.kind = Kind::builtin;
    return h;
  }
  if (spec.rfind("random:", 0) == 0) {
    std::string_view digits = spec.substr(7);
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      fail(Err::ConfigError, "random reviewer needs an unsigned seed: " + std::string(spec));
    }
    h.kind = Kind::random;
    h.seed = seed;
    return h;
  }
  if (spec.rfind("cmd:", 0) == 0) {
    std::string command(spec.substr(4));
    if (split_command(command).empty()) {
      fail(Err::ConfigError, "cmd reviewer needs a command line");
    }
    h.kind = Kind::command;
    h.target = std::move(command);
    return h;
  }
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    h.kind = Kind::http;
    h.target = std::string(spec);
    return h;
  }
  fail(Err::ConfigError, "unknown reviewer spec: " + std::string(spec));
}

std::unique_ptr<Reviewer> make_reviewer(const ReviewerHandle& handle, const Providers* providers,
                                        const OriginalIndex* originals) {
  switch (handle.kind) {
    case ReviewerHandle::Kind::builtin:
      return std::make_unique<BuiltinReviewer>(providers, originals);
    case ReviewerHandle::Kind::random:
      return std::make_unique<RandomReviewer>(handle.seed);
    case ReviewerHandle::Kind::command:
      return std::make_unique<ExternalProcessReviewer>(handle.target, handle.timeout);
    case ReviewerHandle::Kind::http:
      return std::make_unique<HttpReviewer>(handle.target, handle.timeout);
  }
  fail(Err::ConfigError, "unhandled reviewer kind");
}

}  // namespace referee
