#include "keycontact/bank/knowledge_bank.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>

namespace keycontact {

const char* to_string(RecordKind k) { return k == RecordKind::skill ? "skill" : "plan"; }

RecordKind record_kind_from_string(const std::string& s) {
  if (s == "skill") return RecordKind::skill;
  if (s == "plan") return RecordKind::plan;
  fail(ErrorKind::invalid_argument, "unknown record kind '" + s + "'");
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double token_overlap_score(const std::string& query, const std::string& description) {
  const auto qv = tokenize(query), dv = tokenize(description);
  const std::set<std::string> q(qv.begin(), qv.end()), d(dv.begin(), dv.end());
  if (q.empty() || d.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : q) common += d.count(t);
  return static_cast<double>(common) / static_cast<double>(q.size() + d.size() - common);
}

namespace {

class WriteLock {
 public:
  explicit WriteLock(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) fail(ErrorKind::io, "cannot open lock file " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      fail(ErrorKind::io, "cannot lock " + path.string());
    }
  }
  ~WriteLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  WriteLock(const WriteLock&) = delete;
  WriteLock& operator=(const WriteLock&) = delete;

 private:
  int fd_ = -1;
};

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool valid_id(const std::string& id) {
  return id.size() == 64 && id.find_first_not_of("0123456789abcdef") == std::string::npos;
}

}  // namespace

KnowledgeBank::KnowledgeBank(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_ / "records", ec);
  if (ec) fail(ErrorKind::io, "cannot create bank at " + root_.string() + ": " + ec.message());
}

std::filesystem::path KnowledgeBank::default_root() {
  const char* env = std::getenv("KEYCONTACT_BANK");
  if (!env || !*env) fail(ErrorKind::invalid_argument, "no bank path given and KEYCONTACT_BANK is unset");
  return env;
}

std::string KnowledgeBank::record_id(const Json& record) { return sha256_hex(canonical_json(record)); }

std::filesystem::path KnowledgeBank::record_path(const std::string& id) const {
  return root_ / "records" / (id + ".json");
}

std::string KnowledgeBank::put_json(const Json& record, RecordKind kind, const std::string& description,
                                    const std::vector<std::string>& labels) {
  const std::string text = canonical_json(record);
  const std::string id = sha256_hex(text);
  WriteLock lock(root_ / "lock");
  if (std::filesystem::exists(record_path(id))) return id;
  const auto tmp = record_path(id).string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, record_path(id));
  std::ofstream index(root_ / "index.jsonl", std::ios::app | std::ios::binary);
  if (!index) fail(ErrorKind::io, "cannot append to the bank index");
  index << Json{{"id", id}, {"kind", to_string(kind)}, {"description", description}, {"labels", labels}}.dump()
        << "\n";
  return id;
}

std::string KnowledgeBank::put(const SkillRecord& r, const std::filesystem::path& mesh_base) {
  r.validate();
  check_mesh_references(r, mesh_base);
  return put_json(skill_record_to_json(r), RecordKind::skill, r.subtask, r.labels);
}

std::string KnowledgeBank::put(const PlanRecord& r) {
  r.validate();
  return put_json(plan_record_to_json(r), RecordKind::plan, r.task, {});
}

bool KnowledgeBank::contains(const std::string& id) const {
  return valid_id(id) && std::filesystem::exists(record_path(id));
}

Json KnowledgeBank::get_json(const std::string& id) const {
  if (!contains(id)) fail(ErrorKind::not_found, "no record with id '" + id + "'");
  try {
    return Json::parse(read_text(record_path(id)));
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::schema, "record " + id + " is not valid JSON: " + e.what());
  }
}

SkillRecord KnowledgeBank::get_skill(const std::string& id) const {
  return skill_record_from_json(get_json(id), "record " + id);
}

PlanRecord KnowledgeBank::get_plan(const std::string& id) const {
  return plan_record_from_json(get_json(id), "record " + id);
}

std::vector<BankEntry> KnowledgeBank::list() const {
  std::vector<BankEntry> out;
  const auto path = root_ / "index.jsonl";
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      BankEntry e;
      e.id = j.at("id").get<std::string>();
      e.kind = record_kind_from_string(j.at("kind").get<std::string>());
      e.description = j.at("description").get<std::string>();
      e.labels = j.at("labels").get<std::vector<std::string>>();
      out.push_back(std::move(e));
    } catch (const std::exception& e) {
      fail(ErrorKind::schema, "bank index line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<QueryHit> KnowledgeBank::query_text(const std::string& query, const QueryOptions& options) const {
  std::vector<QueryHit> hits;
  for (auto& e : list()) {
    if (options.kind && e.kind != *options.kind) continue;
    const bool has_labels = std::all_of(options.labels.begin(), options.labels.end(), [&](const std::string& l) {
      return std::find(e.labels.begin(), e.labels.end(), l) != e.labels.end();
    });
    if (!has_labels) continue;
    const double s = options.scorer(query, e.description);
    hits.push_back({std::move(e), s});
  }
  std::stable_sort(hits.begin(), hits.end(), [](const QueryHit& a, const QueryHit& b) { return a.score > b.score; });
  if (hits.size() > options.top) hits.resize(options.top);
  return hits;
}

}  // namespace keycontact
