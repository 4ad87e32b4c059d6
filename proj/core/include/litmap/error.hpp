#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace litmap {

/// Base class for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// ---- record ingest -------------------------------------------------------

class FileUnreadable : public IoError {
 public:
  explicit FileUnreadable(const std::string& path)
      : IoError("cannot read file: " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class EmptyFile : public IoError {
 public:
  explicit EmptyFile(const std::string& path) : IoError("empty file: " + path) {}
};

// ---- embeddings ----------------------------------------------------------

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got, std::size_t line)
      : Error("dimension mismatch at line " + std::to_string(line) + ": expected " +
              std::to_string(expected) + ", got " + std::to_string(got)),
        expected_(expected),
        got_(got),
        line_(line) {}
  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t expected_, got_, line_;
};

class NonFiniteValue : public Error {
 public:
  explicit NonFiniteValue(std::size_t line)
      : Error("non-finite value at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(const std::string& id) : Error("duplicate id: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("cosine undefined for a zero vector") {}
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

class BadResponse : public Error {
 public:
  BadResponse(int status, const std::string& body_prefix)
      : Error("bad response (status " + std::to_string(status) + "): " + body_prefix),
        status_(status),
        body_prefix_(body_prefix) {}
  int status() const noexcept { return status_; }
  const std::string& body_prefix() const noexcept { return body_prefix_; }

 private:
  int status_;
  std::string body_prefix_;
};

class PartialResponse : public Error {
 public:
  explicit PartialResponse(std::vector<std::string> missing)
      : Error("response is missing " + std::to_string(missing.size()) + " id(s)"),
        missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

// ---- topic modelling and evaluation --------------------------------------

class TooFewPoints : public Error {
 public:
  TooFewPoints(std::size_t have, std::size_t need)
      : Error("clustering needs at least " + std::to_string(need) + " points, got " +
              std::to_string(have)) {}
};

class EmptyVocabulary : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class NoScorableDocs : public Error {
 public:
  NoScorableDocs() : Error("no non-noise documents to score") {}
};

class TopicWithFewerThanTenKeywords : public Error {
 public:
  explicit TopicWithFewerThanTenKeywords(int topic_id)
      : Error("topic " + std::to_string(topic_id) + " has fewer than 10 keywords"),
        topic_id_(topic_id) {}
  int topic_id() const noexcept { return topic_id_; }

 private:
  int topic_id_;
};

class NotEnoughTopics : public Error {
 public:
  NotEnoughTopics(std::size_t have, std::size_t need)
      : Error("need " + std::to_string(need) + " topics, have " + std::to_string(have)) {}
};

// ---- networks ------------------------------------------------------------

class EmptyGraph : public Error {
 public:
  EmptyGraph() : Error("graph has no nodes") {}
};

class UnknownTopic : public Error {
 public:
  explicit UnknownTopic(int topic_id)
      : Error("unknown topic id " + std::to_string(topic_id)), topic_id_(topic_id) {}
  int topic_id() const noexcept { return topic_id_; }

 private:
  int topic_id_;
};

// ---- summarizer ----------------------------------------------------------

class EmptyTopic : public Error {
 public:
  EmptyTopic() : Error("topic has no abstracts") {}
};

class EndpointError : public Error {
 public:
  /// chunk_index is -1 for the reduce step.
  EndpointError(int chunk_index, const std::string& what)
      : Error("LLM endpoint failed (" +
              (chunk_index < 0 ? std::string("reduce step")
                               : "chunk " + std::to_string(chunk_index)) +
              "): " + what),
        chunk_index_(chunk_index) {}
  int chunk_index() const noexcept { return chunk_index_; }

 private:
  int chunk_index_;
};

class MalformedCompletion : public Error {
 public:
  using Error::Error;
};

class EmptySheet : public Error {
 public:
  EmptySheet() : Error("evaluation sheet has no ratings") {}
};

// ---- pipeline ------------------------------------------------------------

class MissingUpstreamArtifact : public Error {
 public:
  explicit MissingUpstreamArtifact(const std::string& stage)
      : Error("missing upstream artifact from stage '" + stage + "'"), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class ConfigInvalid : public Error {
 public:
  ConfigInvalid(const std::string& field, const std::string& reason)
      : Error("invalid config field '" + field + "': " + reason), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace litmap
