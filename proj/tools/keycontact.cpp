// keycontact: command-line front end over the library pipelines.
//
//   keycontact ground   --trajectories demo.jsonl [--config ground.json] [--out ground.json]
//   keycontact learn    --config learn.json --out DIR [--store] [--bank DIR]
//   keycontact transfer (--record rec.json | --id ID) --reference ref.ply --target tgt.ply --owner NAME
//   keycontact refine   --config scene.json [--record rec.json | --id ID] [--contacts N] [--out report.json]
//   keycontact campaign --config campaign.json --out DIR [--seed-file seeds.txt]
//   keycontact bank     put|get|list|query ...
//
// Results go to --out (or stdout). Failures print one JSON object on stderr:
// {"error": kind, "message": ..., "fields": [...]} and exit nonzero.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "keycontact/bank/knowledge_bank.hpp"
#include "keycontact/bank/pipelines.hpp"
#include "keycontact/common/config_check.hpp"
#include "keycontact/geometry/mesh_io.hpp"
#include "keycontact/grounding/trajectory_io.hpp"
#include "keycontact/keypoints/serialization.hpp"
#include "keycontact/refiner/config_io.hpp"
#include "keycontact/sim/campaign.hpp"

using namespace keycontact;
namespace fs = std::filesystem;

namespace {

void write_text(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  std::ofstream f(out, std::ios::binary);
  if (!f) fail(ErrorKind::io, "cannot write " + out);
  f << text;
}

void write_json(const Json& j, const std::string& out) { write_text(j.dump(2) + "\n", out); }

fs::path bank_root(const std::string& flag) { return flag.empty() ? KnowledgeBank::default_root() : fs::path(flag); }

SkillRecord load_record(const std::string& file, const std::string& id, const std::string& bank) {
  if (!file.empty() && !id.empty()) fail(ErrorKind::invalid_argument, "give either --record or --id, not both");
  if (!file.empty()) return skill_record_from_json(read_json_file(file), file);
  if (id.empty()) fail(ErrorKind::invalid_argument, "a skill record is required (--record or --id)");
  return KnowledgeBank(bank_root(bank)).get_skill(id);
}

int report(const std::string& kind, const std::string& message, const std::vector<FieldIssue>& fields = {}) {
  Json j{{"error", kind}, {"message", message}};
  if (!fields.empty()) {
    Json f = Json::array();
    for (const auto& i : fields) f.push_back({{"field", i.field}, {"message", i.message}});
    j["fields"] = f;
  }
  std::cerr << j.dump() << std::endl;
  return kind == "usage" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keypoint-centric skill learning, transfer and contact refinement"};
  app.require_subcommand(1);

  // ground
  auto* ground = app.add_subcommand("ground", "Segment a demonstration and extract keypoints");
  std::string g_traj, g_config, g_out, g_hand;
  std::optional<double> g_eps, g_gamma;
  ground->add_option("--trajectories", g_traj, "JSON Lines trajectory file")->required();
  ground->add_option("--config", g_config, "Ground config JSON");
  ground->add_option("--hand", g_hand, "Hand entity id");
  ground->add_option("--epsilon", g_eps, "Contact threshold (m)");
  ground->add_option("--gamma", g_gamma, "Minimum hand path length (m)");
  ground->add_option("--out", g_out, "Output file (default stdout)");

  // learn
  auto* learn = app.add_subcommand("learn", "Build skill records from demonstrations");
  std::string l_config, l_out, l_bank;
  bool l_store = false;
  learn->add_option("--config", l_config, "Learn config JSON")->required();
  learn->add_option("--out", l_out, "Directory for plan.json and skill_<k>.json")->required();
  learn->add_flag("--store", l_store, "Also put the records into the bank");
  learn->add_option("--bank", l_bank, "Bank directory (default $KEYCONTACT_BANK)");

  // transfer
  auto* transfer = app.add_subcommand("transfer", "Transfer a record keypoint to a new object");
  std::string t_record, t_id, t_bank, t_ref, t_tgt, t_owner, t_config, t_out, t_role = "master";
  std::optional<std::uint64_t> t_seed;
  transfer->add_option("--record", t_record, "Skill record JSON");
  transfer->add_option("--id", t_id, "Skill record id in the bank");
  transfer->add_option("--bank", t_bank, "Bank directory (default $KEYCONTACT_BANK)");
  transfer->add_option("--reference", t_ref, "Reference cloud PLY with features (record object frame)")->required();
  transfer->add_option("--target", t_tgt, "Target cloud PLY with features")->required();
  transfer->add_option("--owner", t_owner, "Target object id")->required();
  transfer->add_option("--role", t_role, "Keypoint to transfer")->check(CLI::IsMember({"master", "slave"}));
  transfer->add_option("--config", t_config, "Transfer config JSON");
  transfer->add_option("--seed", t_seed, "RANSAC seed");
  transfer->add_option("--out", t_out, "Output file (default stdout)");

  // refine
  auto* refine = app.add_subcommand("refine", "Contact-based refinement in a simulated peg-in-hole scene");
  std::string r_config, r_record, r_id, r_bank, r_out, r_diag;
  std::optional<int> r_contacts;
  std::optional<std::uint64_t> r_seed;
  refine->add_option("--config", r_config, "Scene + refinement config JSON")->required();
  refine->add_option("--record", r_record, "Manipulation skill record supplying the insertion waypoint");
  refine->add_option("--id", r_id, "Same, by bank id");
  refine->add_option("--bank", r_bank, "Bank directory (default $KEYCONTACT_BANK)");
  refine->add_option("--contacts", r_contacts, "Number of contacts (0 = vision only)")->check(CLI::NonNegativeNumber);
  refine->add_option("--seed", r_seed, "Refinement seed");
  refine->add_option("--diagnostics", r_diag, "Per-step diagnostics, JSON Lines");
  refine->add_option("--out", r_out, "Output file (default stdout)");

  // campaign
  auto* campaign = app.add_subcommand("campaign", "Run a simulated refinement campaign");
  std::string c_config, c_out, c_seed_file;
  std::optional<std::uint64_t> c_seed;
  std::optional<int> c_workers;
  campaign->add_option("--config", c_config, "Campaign config JSON")->required();
  campaign->add_option("--out", c_out, "Output directory")->required();
  campaign->add_option("--seed-file", c_seed_file, "Scene seeds, one per line");
  campaign->add_option("--seed", c_seed, "Refinement base seed");
  campaign->add_option("--workers", c_workers, "Worker threads")->check(CLI::PositiveNumber);
  bool c_progress = false;
  campaign->add_flag("--progress", c_progress, "Report progress on stderr");

  // bank
  auto* bank = app.add_subcommand("bank", "Knowledge bank access");
  bank->require_subcommand(1);
  std::string b_root;
  bank->add_option("--bank", b_root, "Bank directory (default $KEYCONTACT_BANK)");
  auto* b_put = bank->add_subcommand("put", "Store a skill or plan record");
  std::string bp_file, bp_mesh_base;
  b_put->add_option("file", bp_file, "Record JSON")->required();
  b_put->add_option("--mesh-base", bp_mesh_base, "Directory for relative mesh paths (default: the record's)");
  auto* b_get = bank->add_subcommand("get", "Print a record");
  std::string bg_id;
  b_get->add_option("id", bg_id, "Record id")->required();
  auto* b_list = bank->add_subcommand("list", "List records in insertion order");
  auto* b_query = bank->add_subcommand("query", "Rank records by token overlap with a text");
  std::string bq_text, bq_kind;
  std::size_t bq_top = 5;
  std::vector<std::string> bq_labels;
  b_query->add_option("text", bq_text, "Query text")->required();
  b_query->add_option("--top", bq_top, "Number of results");
  b_query->add_option("--kind", bq_kind, "skill or plan")->check(CLI::IsMember({"skill", "plan"}));
  b_query->add_option("--label", bq_labels, "Required label (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what());
  }

  try {
    if (ground->parsed()) {
      GroundConfig cfg = g_config.empty() ? GroundConfig{} : ground_config_from_json(read_json_file(g_config));
      if (!g_hand.empty()) cfg.hand_id = g_hand;
      if (g_eps) cfg.epsilon = *g_eps;
      if (g_gamma) cfg.gamma = *g_gamma;
      write_json(ground_result_to_json(ground_demonstration(read_trajectories(g_traj), cfg)), g_out);
    } else if (learn->parsed()) {
      const fs::path cfg_path(l_config);
      const LearnConfig cfg = learn_config_from_json(read_json_file(cfg_path), cfg_path.parent_path());
      const LearnResult res = learn_skills(cfg);
      fs::create_directories(l_out);
      Json ids = Json::array();
      std::optional<KnowledgeBank> kb;
      if (l_store) kb.emplace(bank_root(l_bank));
      write_json(plan_record_to_json(res.plan), (fs::path(l_out) / "plan.json").string());
      for (std::size_t k = 0; k < res.skills.size(); ++k) {
        write_json(skill_record_to_json(res.skills[k]), (fs::path(l_out) / ("skill_" + std::to_string(k) + ".json")).string());
        if (kb) ids.push_back(kb->put(res.skills[k], cfg.base_dir));
      }
      if (kb) {
        const std::string plan_id = kb->put(res.plan);
        write_json(Json{{"plan", plan_id}, {"skills", ids}}, "");
      }
    } else if (transfer->parsed()) {
      const SkillRecord rec = load_record(t_record, t_id, t_bank);
      TransferConfig cfg = t_config.empty() ? TransferConfig{} : transfer_config_from_json(read_json_file(t_config));
      if (t_seed) cfg.seed = *t_seed;
      const auto res = transfer_record_keypoint(rec, role_from_string(t_role), read_ply_cloud(t_ref),
                                                read_ply_cloud(t_tgt), t_owner, cfg);
      write_json(Json{{"schema_version", 1},
                      {"keypoint", keypoint_frame_to_json(res.keypoint)},
                      {"diagnostics", transfer_diagnostics_to_json(res.diagnostics)}},
                 t_out);
    } else if (refine->parsed()) {
      RefineRequest req = refine_request_from_json(read_json_file(r_config));
      if (r_contacts) req.refinement.contacts = *r_contacts;
      if (r_seed) req.refinement.seed = *r_seed;
      std::optional<SkillRecord> rec;
      if (!r_record.empty() || !r_id.empty()) rec = load_record(r_record, r_id, r_bank);
      const RefineReport rep = run_refine(req, rec ? &*rec : nullptr);
      if (!r_diag.empty()) {
        std::string lines;
        for (const auto& s : rep.result.steps) lines += step_diagnostics_to_json(s).dump() + "\n";
        write_text(lines, r_diag);
      }
      write_json(refine_report_to_json(rep), r_out);
    } else if (campaign->parsed()) {
      CampaignConfig cfg = campaign_config_from_json(read_json_file(c_config));
      if (!c_seed_file.empty()) cfg.seeds = read_seed_file(c_seed_file);
      if (c_seed) cfg.refinement.seed = *c_seed;
      if (c_workers) cfg.workers = *c_workers;
      CampaignProgress progress;
      if (c_progress) progress = [](std::size_t d, std::size_t n) { std::cerr << d << "/" << n << "\n"; };
      const CampaignResult res = run_campaign(cfg, progress);
      write_campaign_outputs(res, c_out);
    } else if (bank->parsed()) {
      KnowledgeBank kb(bank_root(b_root));
      if (b_put->parsed()) {
        const Json j = read_json_file(bp_file);
        const std::string kind = j.is_object() && j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
        std::string id;
        if (kind == "skill") {
          const fs::path base = bp_mesh_base.empty() ? fs::path(bp_file).parent_path() : fs::path(bp_mesh_base);
          id = kb.put(skill_record_from_json(j, bp_file), base);
        } else if (kind == "plan") {
          id = kb.put(plan_record_from_json(j, bp_file));
        } else {
          fail(ErrorKind::schema, bp_file + ": 'kind' must be 'skill' or 'plan'");
        }
        write_json(Json{{"id", id}}, "");
      } else if (b_get->parsed()) {
        write_json(kb.get_json(bg_id), "");
      } else if (b_list->parsed()) {
        Json out = Json::array();
        for (const auto& e : kb.list())
          out.push_back({{"id", e.id}, {"kind", to_string(e.kind)}, {"description", e.description}, {"labels", e.labels}});
        write_json(out, "");
      } else if (b_query->parsed()) {
        QueryOptions opt;
        opt.top = bq_top;
        if (!bq_kind.empty()) opt.kind = record_kind_from_string(bq_kind);
        opt.labels = bq_labels;
        Json out = Json::array();
        for (const auto& h : kb.query_text(bq_text, opt))
          out.push_back({{"id", h.entry.id}, {"kind", to_string(h.entry.kind)}, {"description", h.entry.description},
                         {"score", h.score}});
        write_json(out, "");
      }
    }
  } catch (const ValidationError& e) {
    return report(to_string(e.kind()), e.what(), e.issues());
  } catch (const Error& e) {
    return report(to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report("internal", e.what());
  }
  return 0;
}
