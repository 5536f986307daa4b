#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "keycontact/bank/records.hpp"

namespace keycontact {

enum class RecordKind { skill, plan };
const char* to_string(RecordKind k);
RecordKind record_kind_from_string(const std::string& s);

struct BankEntry {
  std::string id;
  RecordKind kind = RecordKind::skill;
  std::string description;  // subtask text or task key
  std::vector<std::string> labels;
};

struct QueryHit {
  BankEntry entry;
  double score = 0.0;
};

/// Lowercase alphanumeric runs.
std::vector<std::string> tokenize(const std::string& text);
/// |Q n D| / |Q u D| over token sets; 0 when either is empty.
double token_overlap_score(const std::string& query, const std::string& description);

using TextScorer = std::function<double(const std::string& query, const std::string& description)>;

struct QueryOptions {
  std::size_t top = 5;
  std::optional<RecordKind> kind;
  /// Keep only records carrying every one of these labels.
  std::vector<std::string> labels;
  TextScorer scorer = token_overlap_score;
};

/// Directory of canonical JSON records named by their SHA-256:
///   <root>/records/<id>.json, <root>/index.jsonl (insertion order),
///   <root>/lock (advisory write lock).
class KnowledgeBank {
 public:
  explicit KnowledgeBank(std::filesystem::path root);
  /// $KEYCONTACT_BANK; throws invalid_argument when unset.
  static std::filesystem::path default_root();

  const std::filesystem::path& root() const { return root_; }

  /// Validates, stores and returns the id. Putting an identical record again
  /// returns the same id without a second index entry. Skill meshes are
  /// checked against their hashes (relative paths against `mesh_base`).
  std::string put(const SkillRecord& r, const std::filesystem::path& mesh_base = {});
  std::string put(const PlanRecord& r);

  /// Stored canonical JSON; throws not_found.
  Json get_json(const std::string& id) const;
  SkillRecord get_skill(const std::string& id) const;
  PlanRecord get_plan(const std::string& id) const;
  bool contains(const std::string& id) const;

  std::vector<BankEntry> list() const;
  /// Ranked by score, ties by insertion order.
  std::vector<QueryHit> query_text(const std::string& query, const QueryOptions& options = {}) const;

  static std::string record_id(const Json& record);

 private:
  std::string put_json(const Json& record, RecordKind kind, const std::string& description,
                       const std::vector<std::string>& labels);
  std::filesystem::path record_path(const std::string& id) const;
  std::filesystem::path root_;
};

}  // namespace keycontact
