#include "keycontact/sim/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "keycontact/common/error.hpp"
#include "keycontact/common/seed.hpp"
#include "keycontact/refiner/config_io.hpp"

namespace keycontact {

void CampaignConfig::validate() const {
  if (profiles.empty()) fail(ErrorKind::invalid_argument, "campaign: no profiles");
  if (noise_grid.empty()) fail(ErrorKind::invalid_argument, "campaign: empty noise grid");
  if (selections.empty()) fail(ErrorKind::invalid_argument, "campaign: no selection modes");
  if (seeds.empty() && trials < 1) fail(ErrorKind::invalid_argument, "campaign: trials must be >= 1");
  if (workers < 1) fail(ErrorKind::invalid_argument, "campaign: workers must be >= 1");
  refinement.validate();
}

std::vector<std::uint64_t> CampaignConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < trials; ++i) out.push_back(static_cast<std::uint64_t>(i));
  return out;
}

Json campaign_config_to_json(const CampaignConfig& c) {
  Json profiles = Json::array(), noise = Json::array(), sel = Json::array();
  for (auto p : c.profiles) profiles.push_back(to_string(p));
  for (const auto& n : c.noise_grid) noise.push_back({{"sigma_t", n.sigma_t}, {"sigma_r", n.sigma_r}});
  for (auto s : c.selections) sel.push_back(to_string(s));
  Json j{{"schema_version", 1},  {"profiles", profiles},   {"clearance", c.clearance},
         {"depth", c.depth},     {"sdf_cell", c.sdf_cell}, {"surface_samples", c.surface_samples},
         {"noise_grid", noise},  {"selections", sel},      {"trials", c.trials},
         {"workers", c.workers}, {"prior_from_perception", c.prior_from_perception},
         {"refinement", refinement_config_to_json(c.refinement)}};
  if (!c.seeds.empty()) j["seeds"] = c.seeds;
  return j;
}

CampaignConfig campaign_config_from_json(const Json& j) {
  CampaignConfig c;
  std::vector<FieldIssue> issues;
  FieldReader r(j, "", issues);
  r.known("schema_version");
  if (r.has("schema_version") && r.at("schema_version") != 1) r.issue("schema_version", "unsupported version");
  r.known("profiles");
  if (r.has("profiles")) {
    const Json& a = r.at("profiles");
    if (!a.is_array() || a.empty()) {
      r.issue("profiles", "expected a non-empty array of profile names");
    } else {
      c.profiles.clear();
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string key = "profiles[" + std::to_string(i) + "]";
        if (!a[i].is_string()) {
          r.issue(key, "expected a string");
          continue;
        }
        try {
          c.profiles.push_back(profile_from_string(a[i].get<std::string>()));
        } catch (const Error&) {
          r.issue(key, "unsupported profile '" + a[i].get<std::string>() + "'");
        }
      }
    }
  }
  r.number("clearance", c.clearance);
  r.check(c.clearance >= 0, "clearance", "must be >= 0");
  r.number("depth", c.depth);
  r.check(c.depth > 0, "depth", "must be > 0");
  r.number("sdf_cell", c.sdf_cell);
  r.check(c.sdf_cell > 0, "sdf_cell", "must be > 0");
  std::uint64_t samples = c.surface_samples;
  r.unsigned_integer("surface_samples", samples);
  c.surface_samples = samples;
  r.known("noise_grid");
  if (r.has("noise_grid")) {
    const Json& a = r.at("noise_grid");
    if (!a.is_array() || a.empty()) {
      r.issue("noise_grid", "expected a non-empty array");
    } else {
      c.noise_grid.clear();
      for (std::size_t i = 0; i < a.size(); ++i) {
        PerceptionNoise n;
        FieldReader q(a[i], r.path("noise_grid[" + std::to_string(i) + "]"), issues);
        q.number("sigma_t", n.sigma_t);
        q.check(n.sigma_t >= 0, "sigma_t", "must be >= 0");
        q.number("sigma_r", n.sigma_r);
        q.check(n.sigma_r >= 0, "sigma_r", "must be >= 0");
        q.reject_unknown();
        c.noise_grid.push_back(n);
      }
    }
  }
  r.known("selections");
  if (r.has("selections")) {
    const Json& a = r.at("selections");
    if (!a.is_array() || a.empty()) {
      r.issue("selections", "expected a non-empty array");
    } else {
      c.selections.clear();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == "ig" || a[i] == "random") {
          c.selections.push_back(selection_mode_from_string(a[i].get<std::string>()));
        } else {
          r.issue("selections[" + std::to_string(i) + "]", "expected 'ig' or 'random'");
        }
      }
    }
  }
  r.integer("trials", c.trials);
  r.check(c.trials >= 1, "trials", "must be >= 1");
  r.integer("workers", c.workers);
  r.check(c.workers >= 1, "workers", "must be >= 1");
  r.boolean("prior_from_perception", c.prior_from_perception);
  r.known("seeds");
  if (r.has("seeds")) {
    const Json& a = r.at("seeds");
    bool ok = a.is_array();
    if (ok) {
      for (const auto& v : a) ok = ok && v.is_number_unsigned();
    }
    if (ok) {
      c.seeds = a.get<std::vector<std::uint64_t>>();
    } else {
      r.issue("seeds", "expected an array of non-negative integers");
    }
  }
  r.known("refinement");
  if (r.has("refinement")) read_refinement_config(r.at("refinement"), "refinement", c.refinement, issues);
  r.reject_unknown();
  throw_if_issues(std::move(issues));
  return c;
}

std::vector<std::uint64_t> read_seed_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read seed file " + path.string());
  std::vector<std::uint64_t> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    if (tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 20) {
      fail(ErrorKind::schema, path.string() + ":" + std::to_string(lineno) + ": expected an unsigned integer seed");
    }
    out.push_back(std::stoull(tok));
  }
  if (out.empty()) fail(ErrorKind::schema, "seed file " + path.string() + " has no seeds");
  return out;
}

namespace {

struct Job {
  std::size_t shape_index;
  std::size_t noise_index;
  SelectionMode selection;
  std::uint64_t seed;
};

TrialRecord run_trial(const std::shared_ptr<const PegHoleShapes>& shapes, const PerceptionNoise& noise,
                      SelectionMode selection, std::uint64_t seed, const RefinementConfig& base,
                      bool prior_from_perception, std::size_t noise_index) {
  TrialRecord t;
  t.profile = shapes->options.profile;
  t.noise = noise;
  t.selection = selection;
  t.seed = seed;
  const Scene scene = make_peg_hole_scene(shapes, noise, seed);
  RefinementConfig cfg = base;
  cfg.selection = selection;
  if (prior_from_perception) {
    cfg.noise.prior_sigma_t = noise.sigma_t;
    cfg.noise.prior_sigma_r = noise.sigma_r;
  }
  // Same stream for both selection modes so comparisons are paired.
  cfg.seed = derive_seed(base.seed, {seed, static_cast<std::uint64_t>(t.profile), noise_index});
  SimContactOracle oracle(scene, cfg.contact_model, cfg.probe, cfg.noise.contact_sigma, cfg.seed);
  const auto res = run_refinement(scene.problem(cfg.contact_model), scene.perceived_master_pose,
                                  scene.perceived_in_hand, shapes->waypoint, oracle, cfg);
  t.vision = evaluate_insertion(scene, scene.perceived_in_hand);
  t.refined = evaluate_insertion(scene, res.estimate);
  t.contacts_made = res.contacts_made;
  t.aborted = res.aborted;
  t.pose_entropy.push_back(res.initial_pose_entropy);
  if (t.vision.translation_error <= scene.clearance()) t.contacts_to_threshold = 0;
  for (const auto& s : res.steps) {
    t.pose_entropy.push_back(s.pose_entropy);
    t.weight_entropy.push_back(s.weight_entropy);
    t.translation_error.push_back(s.translation_error.value_or(std::nan("")));
    if (t.contacts_to_threshold < 0 && s.translation_error && *s.translation_error <= scene.clearance()) {
      t.contacts_to_threshold = s.step;
    }
  }
  return t;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double p95_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size()))) - 1;
  return v[std::min(k, v.size() - 1)];
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<double> column_mean(const std::vector<const std::vector<double>*>& rows) {
  std::size_t n = 0;
  for (auto* r : rows) n = std::max(n, r->size());
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0;
    int c = 0;
    for (auto* r : rows) {
      if (k < r->size()) {
        s += (*r)[k];
        ++c;
      }
    }
    out[k] = c ? s / c : 0.0;
  }
  return out;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg, const CampaignProgress& progress) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::shared_ptr<const PegHoleShapes>> shapes;
  for (auto p : cfg.profiles) {
    PegHoleOptions o;
    o.profile = p;
    o.clearance = cfg.clearance;
    o.depth = cfg.depth;
    o.sdf_cell = cfg.sdf_cell;
    o.surface_samples = cfg.surface_samples;
    shapes.push_back(std::make_shared<const PegHoleShapes>(make_peg_hole_shapes(o)));
  }
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < shapes.size(); ++s)
    for (std::size_t n = 0; n < cfg.noise_grid.size(); ++n)
      for (auto sel : cfg.selections)
        for (auto seed : cfg.seed_list()) jobs.push_back({s, n, sel, seed});

  CampaignResult res;
  res.trials.resize(jobs.size());
  std::atomic<std::size_t> next{0}, done{0};
  std::mutex report;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& j = jobs[i];
        res.trials[i] = run_trial(shapes[j.shape_index], cfg.noise_grid[j.noise_index], j.selection, j.seed,
                                  cfg.refinement, cfg.prior_from_perception, j.noise_index);
      } catch (...) {
        std::lock_guard<std::mutex> lock(report);
        if (!error) error = std::current_exception();
        next = jobs.size();
        return;
      }
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(report);
        progress(d, jobs.size());
      }
    }
  };
  if (cfg.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  res.cells = summarize_trials(res.trials);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<CellMetrics> summarize_trials(const std::vector<TrialRecord>& trials) {
  // Cells in order of first appearance.
  std::vector<CellMetrics> cells;
  std::vector<std::vector<const TrialRecord*>> members;
  for (const auto& t : trials) {
    std::size_t k = 0;
    for (; k < cells.size(); ++k) {
      const auto& c = cells[k];
      if (c.profile == t.profile && c.selection == t.selection && c.noise.sigma_t == t.noise.sigma_t &&
          c.noise.sigma_r == t.noise.sigma_r)
        break;
    }
    if (k == cells.size()) {
      CellMetrics c;
      c.profile = t.profile;
      c.noise = t.noise;
      c.selection = t.selection;
      cells.push_back(c);
      members.emplace_back();
    }
    members[k].push_back(&t);
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    CellMetrics& c = cells[k];
    std::vector<double> te, re, vte, ctt;
    std::vector<const std::vector<double>*> pe, we, tr;
    int vs = 0, rs = 0;
    for (const auto* t : members[k]) {
      vs += t->vision.success;
      rs += t->refined.success;
      te.push_back(t->refined.translation_error);
      re.push_back(t->refined.rotation_error);
      vte.push_back(t->vision.translation_error);
      if (t->contacts_to_threshold >= 0) ctt.push_back(t->contacts_to_threshold);
      c.aborted += t->aborted;
      pe.push_back(&t->pose_entropy);
      we.push_back(&t->weight_entropy);
      tr.push_back(&t->translation_error);
    }
    c.trials = static_cast<int>(members[k].size());
    c.vision_success_rate = static_cast<double>(vs) / c.trials;
    c.refined_success_rate = static_cast<double>(rs) / c.trials;
    c.vision_translation_mean = mean_of(vte);
    c.translation_mean = mean_of(te);
    c.translation_p95 = p95_of(te);
    c.rotation_mean = mean_of(re);
    c.rotation_p95 = p95_of(re);
    c.reached_threshold = static_cast<int>(ctt.size());
    c.contacts_to_threshold_mean = mean_of(ctt);
    c.pose_entropy_mean = column_mean(pe);
    c.weight_entropy_mean = column_mean(we);
    c.translation_error_mean = column_mean(tr);
  }
  return cells;
}

std::string trials_csv(const std::vector<TrialRecord>& trials) {
  std::string out =
      "profile,sigma_t,sigma_r,selection,seed,vision_translation_error,vision_rotation_error,vision_penetration,"
      "vision_success,refined_translation_error,refined_rotation_error,refined_penetration,refined_success,"
      "contacts_made,aborted,contacts_to_threshold,final_pose_entropy\n";
  for (const auto& t : trials) {
    out += std::string(to_string(t.profile)) + "," + fmt(t.noise.sigma_t) + "," + fmt(t.noise.sigma_r) + "," +
           to_string(t.selection) + "," + std::to_string(t.seed) + "," + fmt(t.vision.translation_error) + "," +
           fmt(t.vision.rotation_error) + "," + fmt(t.vision.penetration) + "," + (t.vision.success ? "1" : "0") +
           "," + fmt(t.refined.translation_error) + "," + fmt(t.refined.rotation_error) + "," +
           fmt(t.refined.penetration) + "," + (t.refined.success ? "1" : "0") + "," +
           std::to_string(t.contacts_made) + "," + (t.aborted ? "1" : "0") + "," +
           std::to_string(t.contacts_to_threshold) + "," + fmt(t.pose_entropy.back()) + "\n";
  }
  return out;
}

Json campaign_summary_json(const CampaignResult& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"profile", to_string(c.profile)},
                     {"sigma_t", c.noise.sigma_t},
                     {"sigma_r", c.noise.sigma_r},
                     {"selection", to_string(c.selection)},
                     {"trials", c.trials},
                     {"vision_success_rate", c.vision_success_rate},
                     {"refined_success_rate", c.refined_success_rate},
                     {"vision_translation_error_mean", c.vision_translation_mean},
                     {"translation_error_mean", c.translation_mean},
                     {"translation_error_p95", c.translation_p95},
                     {"rotation_error_mean", c.rotation_mean},
                     {"rotation_error_p95", c.rotation_p95},
                     {"contacts_to_threshold_mean", c.contacts_to_threshold_mean},
                     {"reached_threshold", c.reached_threshold},
                     {"aborted", c.aborted},
                     {"pose_entropy_mean", c.pose_entropy_mean},
                     {"weight_entropy_mean", c.weight_entropy_mean},
                     {"translation_error_mean_per_step", c.translation_error_mean}});
  }
  return Json{{"schema_version", 1}, {"trials", r.trials.size()}, {"cells", cells}};
}

void write_campaign_outputs(const CampaignResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + (dir / name).string());
    out << text;
  };
  write("trials.csv", trials_csv(r.trials));
  write("summary.json", campaign_summary_json(r).dump(2) + "\n");
  write("timing.json", Json{{"wall_seconds", r.wall_seconds}, {"trials", r.trials.size()}}.dump(2) + "\n");
}

}  // namespace keycontact
