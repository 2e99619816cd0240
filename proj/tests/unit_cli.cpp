#include "hypwave/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hypwave/errors.hpp"
#include "hypwave/evolution.hpp"
#include "hypwave/grid.hpp"
#include "hypwave/report.hpp"

using namespace hypwave;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int rc = 0;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.rc = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("hypwave_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool has_tmp_files(const fs::path& dir) {
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".tmp") return true;
  return false;
}

}  // namespace

TEST_CASE("report: json and csv round-trip doubles losslessly") {
  Report r;
  r.subcommand = "demo";
  r.config["k"] = "v";
  r.scalars["third"] = 1.0 / 3.0;
  r.scalars["tiny"] = 4.9406564584124654e-324;
  r.scalars["big"] = 1.7976931348623157e308;
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{-0.1, 3.0e-17}, {2.0, -5.5}};
  r.tables["vals"] = t;

  const Report back = report_from_json(report_to_json(r));
  CHECK(back.subcommand == r.subcommand);
  CHECK(back.config.at("k") == "v");
  CHECK(back.scalars.at("third") == r.scalars.at("third"));
  CHECK(back.scalars.at("tiny") == r.scalars.at("tiny"));
  CHECK(back.scalars.at("big") == r.scalars.at("big"));
  CHECK(back.tables.at("vals").rows == t.rows);

  const Table t2 = table_from_csv(table_to_csv(t));
  CHECK(t2.columns == t.columns);
  CHECK(t2.rows == t.rows);
}

TEST_CASE("report: malformed inputs raise io errors") {
  CHECK_THROWS_AS((void)table_from_csv(""), io_error);
  CHECK_THROWS_AS((void)table_from_csv("a,b\n1.0\n"), io_error);  // ragged
  CHECK_THROWS_AS((void)table_from_csv("a\nnope\n"), io_error);
  CHECK_THROWS_AS((void)table_from_csv("a\n1.5x\n"), io_error);
  CHECK_THROWS_AS((void)report_from_json("{not json"), io_error);
  CHECK_THROWS_AS((void)report_from_json("{\"version\":\"x\"}"), io_error);
  CHECK_THROWS_AS((void)read_text("/nonexistent/path/report.json"), io_error);
}

TEST_CASE("report: atomic writes and finite-value validation") {
  const fs::path dir = fresh_dir("report");
  Report r;
  r.subcommand = "demo";
  r.scalars["x"] = 2.0;
  Table t;
  t.columns = {"c"};
  t.rows = {{1.0}};
  r.tables["t"] = t;
  const std::string path = write_report(r, dir.string(), "demo");
  CHECK(fs::exists(path));
  CHECK(fs::exists(dir / "demo__t.csv"));
  CHECK_FALSE(has_tmp_files(dir));
  const Report back = read_report(path);
  CHECK(back.scalars.at("x") == 2.0);

  Report bad = r;
  bad.scalars["y"] = std::nan("");
  CHECK_THROWS_AS((void)write_report(bad, dir.string(), "bad"),
                  validation_error);
  CHECK_FALSE(fs::exists(dir / "bad.json"));
}

TEST_CASE("report: golden comparison tolerances and schema checks") {
  Report g;
  g.scalars["rate"] = 1.0;
  Table t;
  t.columns = {"v"};
  t.rows = {{0.5}};
  g.tables["t"] = t;

  Report same = g;
  CHECK(golden_check(same, g, 0.0, 0.0).pass);

  Report close_enough = g;
  close_enough.scalars["rate"] = 1.0005;
  CHECK(golden_check(close_enough, g, 1e-3, 0.0).pass);

  Report off = g;
  off.scalars["rate"] = 1.001;
  const GoldenDiff d = golden_check(off, g, 1e-6, 0.0);
  CHECK_FALSE(d.pass);
  CHECK(d.message.find("rate") != std::string::npos);

  Report cell = g;
  cell.tables["t"].rows[0][0] = 0.5 + 1e-7;
  CHECK_FALSE(golden_check(cell, g, 1e-9, 0.0).pass);
  CHECK(golden_check(cell, g, 1e-6, 0.0).pass);

  Report extra = g;
  extra.scalars["other"] = 0.0;
  CHECK_THROWS_AS((void)golden_check(extra, g, 1e-6, 0.0), validation_error);
  Report wrongcols = g;
  wrongcols.tables["t"].columns = {"w"};
  CHECK_THROWS_AS((void)golden_check(wrongcols, g, 1e-6, 0.0),
                  validation_error);
}

TEST_CASE("cli: transform emits all chart representations") {
  const fs::path dir = fresh_dir("transform");
  const RunResult r = run({"--out", dir.string(), "transform"});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "transform.json").string());
  const Table& t = rep.tables.at("charts");
  REQUIRE(t.rows.size() == 1);
  const auto col = [&](const std::string& name) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      if (t.columns[c] == name) return t.rows[0][c];
    FAIL("missing column ", name);
    return 0.0;
  };
  CHECK(col("t") == 1.0);
  CHECK(col("T") == -1.0);  // (1,0,0,0) maps to T = -1
  CHECK(col("tau") == 0.0);
  CHECK(col("det") == 1.0);

  // Round-trip: feed the hyperboloidal representation back in.
  const RunResult r2 = run({"--out", dir.string(), "transform", "--chart",
                            "hyperboloidal", "--point", "-1,0,0,0"});
  CHECK(r2.rc == 0);
  const Report rep2 = read_report((dir / "transform.json").string());
  CHECK(rep2.tables.at("charts").rows[0][0] == doctest::Approx(1.0));

  // Light-cone point is rejected by the chart machinery.
  const RunResult r3 =
      run({"--out", dir.string(), "transform", "--point", "1,1,0,0"});
  CHECK(r3.rc == 1);
  // Penrose rows must be radial.
  const RunResult r4 = run({"--out", dir.string(), "transform", "--chart",
                            "penrose", "--point", "0.5,0.2,0.1,0"});
  CHECK(r4.rc == 1);
}

TEST_CASE("cli: spectrum reports the growing eigenvalue and analytic roots") {
  const fs::path dir = fresh_dir("spectrum");
  const RunResult r =
      run({"--out", dir.string(), "spectrum", "--ell", "0", "--n", "16"});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "spectrum.json").string());
  CHECK(rep.scalars.at("root_count") == 1.0);
  CHECK(std::abs(rep.scalars.at("root_0") - 1.0) <= 1e-9);
  bool found = false;
  for (const auto& row : rep.tables.at("eigenvalues").rows)
    if (std::abs(row[0] - 1.0) <= 1e-8 && std::abs(row[1]) <= 1e-8)
      found = true;
  CHECK(found);

  const RunResult bad =
      run({"--out", dir.string(), "spectrum", "--ell", "-1"});
  CHECK(bad.rc == 1);
  CHECK(bad.err.find("ell") != std::string::npos);
}

TEST_CASE("cli: evolve matches the exact family and handles zero data") {
  const fs::path dir = fresh_dir("evolve");
  const RunResult r = run({"--out", dir.string(), "evolve", "--ell", "0",
                           "--n", "16", "--tau-end", "2", "--data", "va:0.01",
                           "--nonlinear", "--save-snapshot",
                           (dir / "end.csv").string()});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "evolve.json").string());
  RadialGrid g(16);
  const double exact = energy_norm(exact_family_va(0.01, 2.0, g), g);
  CHECK(std::abs(rep.scalars.at("final_norm") - exact) <= 1e-8);
  CHECK(rep.scalars.at("blowup") == 0.0);
  CHECK(fs::exists(dir / "end.csv"));

  const RunResult z = run({"--out", dir.string(), "evolve", "--n", "12",
                           "--tau-end", "1", "--data", "zero"});
  CHECK(z.rc == 0);
  const Report zrep = read_report((dir / "evolve.json").string());
  CHECK(zrep.scalars.at("final_norm") == 0.0);
  CHECK(zrep.scalars.count("fit_slope") == 0);  // nothing to fit

  const RunResult bad = run({"--out", dir.string(), "evolve", "--data",
                             "mode0"});  // mode0 needs ell = 1
  CHECK(bad.rc == 1);
}

TEST_CASE("cli: saved snapshots feed back as data files") {
  const fs::path dir = fresh_dir("roundtrip");
  const std::string snap = (dir / "state.csv").string();
  CHECK(run({"--out", dir.string(), "evolve", "--n", "12", "--tau-end", "1",
             "--data", "bump:0.01", "--save-snapshot", snap})
            .rc == 0);
  CHECK(run({"--out", dir.string(), "evolve", "--n", "12", "--tau-end", "1",
             "--data", snap})
            .rc == 0);
  // Explicit n contradicting the file is refused.
  const RunResult bad = run({"--out", dir.string(), "evolve", "--n", "16",
                             "--tau-end", "1", "--data", snap});
  CHECK(bad.rc == 1);
  CHECK(bad.err.find("rows") != std::string::npos);
}

TEST_CASE("cli: strichartz post-processes a stored trajectory") {
  const fs::path dir = fresh_dir("strichartz");
  const std::string traj = (dir / "traj.csv").string();
  CHECK(run({"--out", dir.string(), "evolve", "--n", "16", "--tau-end", "4.6",
             "--data", "va:0.05", "--nonlinear", "--stride", "4",
             "--save-trajectory", traj})
            .rc == 0);
  const RunResult r =
      run({"--out", dir.string(), "strichartz", "--trajectory", traj, "--t0",
           "11", "--doublings", "2"});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "strichartz.json").string());
  CHECK(rep.tables.at("strichartz").rows.size() == 3);
  CHECK(std::isfinite(rep.scalars.at("exponent")));

  // Missing file is an I/O failure (exit 3).
  const RunResult io = run({"--out", dir.string(), "strichartz",
                            "--trajectory", (dir / "nope.csv").string()});
  CHECK(io.rc == 3);
  // Insufficient coverage is a validation failure from the norm routine.
  const RunResult cov = run({"--out", dir.string(), "strichartz",
                             "--trajectory", traj, "--t0", "1000"});
  CHECK(cov.rc == 1);
}

TEST_CASE("cli: flux reports a non-increasing energy ledger") {
  const fs::path dir = fresh_dir("flux");
  const RunResult r = run({"--out", dir.string(), "flux", "--cells", "300"});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "flux.json").string());
  CHECK(rep.scalars.at("max_step_increase") <=
        1e-10 * rep.scalars.at("initial_energy"));
  CHECK(rep.scalars.at("final_energy") <=
        1e-20 * rep.scalars.at("initial_energy"));
  CHECK(run({"--out", dir.string(), "flux", "--profile", "square:1,2"}).rc ==
        1);
}

TEST_CASE("cli: shoot finds the family threshold at zero") {
  const fs::path dir = fresh_dir("shoot");
  const RunResult r =
      run({"--out", dir.string(), "shoot", "--family", "va", "--n", "12"});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "shoot.json").string());
  CHECK(rep.scalars.at("alpha_star") == 0.0);
  CHECK(rep.scalars.at("outcome_code") == 2.0);  // stays on the surface
  CHECK(rep.scalars.count("slope_at_alpha") == 0);  // zero solution: no fit
  CHECK(run({"--out", dir.string(), "shoot", "--family", "nope"}).rc == 1);
}

TEST_CASE("cli: manifold iteration emits corrections and diagnostics") {
  const fs::path dir = fresh_dir("manifold");
  const RunResult r = run({"--out", dir.string(), "manifold", "--data",
                           "bump:0.002", "--n", "24", "--project"});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "manifold.json").string());
  CHECK(rep.scalars.at("c1") == 0.0);
  CHECK(rep.scalars.at("c2") == 0.0);
  CHECK(rep.scalars.at("c3") == 0.0);
  CHECK(std::abs(rep.scalars.at("c0")) > 0.0);
  CHECK(rep.scalars.at("residual") <= 1e-6);
  CHECK(rep.scalars.at("iters") <= 10.0);
  CHECK(rep.tables.at("contraction").rows.size() >= 2);
  CHECK(rep.tables.at("norm_history").rows.size() >= 100);

  // Raw bump data carries a growing component: refused without --project.
  const RunResult bad = run({"--out", dir.string(), "manifold", "--data",
                             "bump:0.002", "--n", "24"});
  CHECK(bad.rc == 1);
}

TEST_CASE("cli: golden check round trip through the check subcommand") {
  const fs::path dir = fresh_dir("check");
  const std::string a = (dir / "a").string(), b = (dir / "b").string();
  CHECK(run({"--out", a, "spectrum", "--ell", "1", "--n", "12"}).rc == 0);
  CHECK(run({"--out", b, "spectrum", "--ell", "1", "--n", "12"}).rc == 0);
  const RunResult pass =
      run({"check", "--report", a + "/spectrum.json", "--golden",
           b + "/spectrum.json", "--abs-tol", "0", "--rel-tol", "0"});
  CHECK(pass.rc == 0);  // determinism: identical runs compare bit-exactly
  CHECK(pass.out.find("PASS") != std::string::npos);

  Report tweaked = read_report(a + "/spectrum.json");
  tweaked.scalars.at("root_0") += 1e-3;
  write_text_atomic(a + "/tweaked.json", report_to_json(tweaked));
  const RunResult fail =
      run({"check", "--report", a + "/tweaked.json", "--golden",
           b + "/spectrum.json", "--abs-tol", "1e-6", "--rel-tol", "0"});
  CHECK(fail.rc == 1);
  CHECK(fail.out.find("root_0") != std::string::npos);
}

TEST_CASE("cli: config file mirrors the flags") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream os(dir / "run.cfg");
    os << "out=" << dir.string() << "\n";
    os << "[spectrum]\n";
    os << "ell=1\n";
    os << "n=12\n";
  }
  const RunResult r =
      run({"--config", (dir / "run.cfg").string(), "spectrum"});
  CHECK(r.rc == 0);
  const Report rep = read_report((dir / "spectrum.json").string());
  CHECK(rep.config.at("ell") == "1");
  CHECK(std::abs(rep.scalars.at("root_0") - 0.0) <= 1e-9);
}

TEST_CASE("cli: no temp files survive and help exits cleanly") {
  const fs::path dir = fresh_dir("tmpscan");
  CHECK(run({"--out", dir.string(), "specfun", "--table", "wronskian",
             "--ell", "3"})
            .rc == 0);
  CHECK_FALSE(has_tmp_files(dir));
  const RunResult h = run({"--help"});
  CHECK(h.rc == 0);
  CHECK(h.out.find("shoot") != std::string::npos);
  CHECK(run({}).rc == 1);             // a subcommand is required
  CHECK(run({"frobnicate"}).rc == 1);  // unknown subcommand
}
