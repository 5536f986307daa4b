#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <thread>

#include "keycontact/bank/knowledge_bank.hpp"
#include "test_support.hpp"

using namespace keycontact;

namespace {

std::filesystem::path demo_dir() { return std::filesystem::path(std::getenv("KEYCONTACT_FIXTURES")) / "demo"; }

SkillRecord golden_skill(int k) {
  return skill_record_from_json(read_json_file(demo_dir() / "golden" / ("skill_" + std::to_string(k) + ".json")));
}

SkillRecord random_skill(std::mt19937_64& rng, int i) {
  SkillRecord r = golden_skill(i % 2);
  r.subtask = "subtask " + std::to_string(i) + " " + std::to_string(rng() % 1000);
  r.meshes.clear();
  for (auto& w : r.waypoints.waypoints) w = w * testing::random_pose(rng, 0.01);
  r.labels = {"l" + std::to_string(i % 7)};
  return r;
}

}  // namespace

TEST_CASE("records round-trip byte-equal through the bank") {
  const auto dir = testing::temp_dir("bank_roundtrip");
  KnowledgeBank bank(dir);
  for (int k = 0; k < 2; ++k) {
    const SkillRecord r = golden_skill(k);
    const std::string id = bank.put(r, demo_dir());
    CHECK(id == KnowledgeBank::record_id(skill_record_to_json(r)));
    CHECK(canonical_json(bank.get_json(id)) == canonical_json(skill_record_to_json(r)));
    CHECK(canonical_json(skill_record_to_json(bank.get_skill(id))) == canonical_json(skill_record_to_json(r)));
    CHECK(bank.put(r, demo_dir()) == id);  // idempotent
  }
  PlanRecord plan{"put the peg in the block", {"pick up the peg", "insert the peg into the block"}};
  const std::string pid = bank.put(plan);
  CHECK(bank.get_plan(pid).subtasks == plan.subtasks);
  CHECK(bank.list().size() == 3);

  // Reopening sees the same store.
  KnowledgeBank again(dir);
  CHECK(again.list().size() == 3);
  CHECK(again.get_plan(pid).task == plan.task);

  CHECK_THROWS_AS(bank.get_json("0123"), Error);
  try {
    bank.get_json(std::string(64, 'a'));
    FAIL("expected not_found");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_found);
  }
  CHECK_THROWS_AS(bank.get_skill(pid), Error);  // a plan is not a skill
  CHECK_THROWS_AS(bank.put(PlanRecord{"empty", {}}), Error);
}

TEST_CASE("schema mismatches are rejected") {
  Json j = skill_record_to_json(golden_skill(1));
  Json v2 = j;
  v2["schema_version"] = 2;
  CHECK_THROWS_AS(skill_record_from_json(v2), Error);
  Json missing = j;
  missing.erase("waypoints");
  CHECK_THROWS_AS(skill_record_from_json(missing), Error);
  Json bad_phase = j;
  bad_phase["phase"] = "juggling";
  try {
    skill_record_from_json(bad_phase);
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
  }
  Json plan = plan_record_to_json(PlanRecord{"t", {"a"}});
  plan["subtasks"] = Json::array();
  CHECK_THROWS_AS(plan_record_from_json(plan), Error);
}

TEST_CASE("mesh references are checked against their hashes") {
  const auto dir = testing::temp_dir("bank_mesh");
  std::filesystem::copy(demo_dir() / "meshes", dir / "meshes");
  KnowledgeBank bank(dir / "bank");
  SkillRecord r = golden_skill(1);
  CHECK_NOTHROW(bank.put(r, dir));
  CHECK(r.meshes.size() == 2);
  CHECK(file_sha256(dir / r.meshes[0].path) == r.meshes[0].sha256);
  std::ofstream(dir / "meshes" / "peg.obj", std::ios::app) << "# edited\n";
  r.subtask += " again";
  try {
    bank.put(r, dir);
    FAIL("expected a hash mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
  }
  std::filesystem::remove(dir / "meshes" / "peg.obj");
  try {
    bank.put(r, dir);
    FAIL("expected a missing mesh");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_found);
  }
  // Known digest.
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("1000 records are all retrievable with unique ids") {
  const auto dir = testing::temp_dir("bank_sweep");
  KnowledgeBank bank(dir);
  std::mt19937_64 rng(7);
  std::vector<std::pair<std::string, std::string>> stored;
  for (int i = 0; i < 1000; ++i) {
    if (i % 3 == 0) {
      PlanRecord p{"task " + std::to_string(i), {"a " + std::to_string(i), "b"}};
      stored.emplace_back(bank.put(p), canonical_json(plan_record_to_json(p)));
    } else {
      const SkillRecord s = random_skill(rng, i);
      stored.emplace_back(bank.put(s), canonical_json(skill_record_to_json(s)));
    }
  }
  std::set<std::string> ids;
  for (const auto& [id, text] : stored) {
    ids.insert(id);
    CHECK(canonical_json(bank.get_json(id)) == text);
  }
  CHECK(ids.size() == 1000);
  const auto listed = bank.list();
  REQUIRE(listed.size() == 1000);
  for (std::size_t i = 0; i < listed.size(); ++i) CHECK(listed[i].id == stored[i].first);
}

TEST_CASE("token overlap query matches hand-computed scores") {
  const auto dir = testing::temp_dir("bank_query");
  KnowledgeBank bank(dir);
  const std::vector<std::string> texts = {"pick up the red cup", "place the cup on the shelf", "open the drawer",
                                          "pour water into the cup", "wipe the table"};
  std::vector<std::string> ids;
  for (const auto& t : texts) ids.push_back(bank.put(PlanRecord{t, {"step"}}));

  // Q = {put, the, cup, on, table}; score = |Q n D| / |Q u D|.
  const auto hits = bank.query_text("Put the cup on the table!", {.top = 5});
  REQUIRE(hits.size() == 5);
  const std::vector<std::pair<std::size_t, double>> expected = {
      {1, 3.0 / 7.0}, {4, 2.0 / 6.0}, {0, 2.0 / 8.0}, {3, 2.0 / 8.0}, {2, 1.0 / 7.0}};
  for (std::size_t i = 0; i < 5; ++i) {
    CAPTURE(i);
    CHECK(hits[i].entry.id == ids[expected[i].first]);
    CHECK(hits[i].score == doctest::Approx(expected[i].second).epsilon(1e-15));
  }
  CHECK(bank.query_text("pick up the red cup").front().entry.id == ids[0]);
  CHECK(bank.query_text("pick up the red cup").front().score == 1.0);
  for (const auto& h : bank.query_text("zebra crossing", {.top = 10})) CHECK(h.score == 0.0);
  CHECK(bank.query_text("cup", {.top = 2}).size() == 2);

  // Filters and an injected scorer.
  const std::string skill_id = bank.put(golden_skill(1), demo_dir());
  QueryOptions opt;
  opt.kind = RecordKind::skill;
  CHECK(bank.query_text("cup", opt).size() == 1);
  opt.labels = {"peg_in_hole"};
  CHECK(bank.query_text("anything", opt).front().entry.id == skill_id);
  opt.labels = {"missing"};
  CHECK(bank.query_text("anything", opt).empty());
  QueryOptions length_scorer;
  length_scorer.scorer = [](const std::string&, const std::string& d) { return -static_cast<double>(d.size()); };
  CHECK(bank.query_text("", length_scorer).front().entry.id == ids[4]);  // "wipe the table"
}

TEST_CASE("concurrent writers keep the index consistent") {
  const auto dir = testing::temp_dir("bank_lock");
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      KnowledgeBank bank(dir);
      for (int i = 0; i < 50; ++i) bank.put(PlanRecord{"task " + std::to_string(i % 30), {"w" + std::to_string(w)}});
      // Shared records: every writer puts the same 10.
      for (int i = 0; i < 10; ++i) bank.put(PlanRecord{"shared " + std::to_string(i), {"s"}});
    });
  }
  for (auto& t : pool) t.join();
  KnowledgeBank bank(dir);
  const auto all = bank.list();
  std::set<std::string> ids;
  for (const auto& e : all) ids.insert(e.id);
  CHECK(ids.size() == all.size());
  CHECK(all.size() == 4 * 30 + 10);
}

TEST_CASE("default bank path comes from the environment") {
  ::setenv("KEYCONTACT_BANK", "/tmp/somewhere", 1);
  CHECK(KnowledgeBank::default_root() == "/tmp/somewhere");
  ::unsetenv("KEYCONTACT_BANK");
  CHECK_THROWS_AS(KnowledgeBank::default_root(), Error);
}
