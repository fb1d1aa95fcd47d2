#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pns/config.hpp"
#include "pns/error.hpp"
#include "pns/experiments.hpp"
#include "pns/pnsf1.hpp"
#include "pns/report_io.hpp"

using namespace pns;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("pns_experiments_" + name);
    fs::remove_all(p);
    return p;
}

RunConfig config(std::vector<std::string> overrides) {
    overrides.insert(overrides.begin(), {"flow.rho=1", "flow.mu=0.1"});
    return parse_config_text("", overrides);
}

}  // namespace

TEST(UnitStream, SplitMixReference) {
    UnitStream s(0);
    // first splitmix64 output for state 0 is 0xe220a8397b1dcdaf
    EXPECT_EQ(s.next(), static_cast<double>(0xe220a8397b1dcdafULL >> 11) * 0x1.0p-53);
    UnitStream a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double v = a.next();
        EXPECT_EQ(v, b.next());
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
}

TEST(Families, BumpsInsideBox) {
    const double L = 1.3, side = 2 * std::numbers::pi * L;
    const auto bumps = bump_family(12, 3, L);
    ASSERT_EQ(bumps.size(), 12u);
    EXPECT_DOUBLE_EQ(bumps[0].first.x, side / 2);
    for (const auto& [c, r] : bumps)
        for (double v : {c.x, c.y, c.z}) {
            EXPECT_GT(v - r, 0.0);
            EXPECT_LT(v + r, side);
        }
}

TEST(Families, WallLatticeVanishesOnWallsAtUnitTime) {
    const double n = 1.0, side = n * std::numbers::pi;
    const auto b = wall_lattice_bundle(n, 1.0);
    for (double a : {0.3, 1.1, 2.5})
        for (double c : {0.7, 1.9})
            for (const Point4 p : {Point4{0, a, c, 1}, Point4{side, a, c, 1}, Point4{a, 0, c, 1}, Point4{a, side, c, 1},
                                   Point4{a, c, 0, 1}, Point4{a, c, side, 1}})
                for (const auto* f : {&b.ux, &b.uy, &b.uz}) EXPECT_NEAR(f->closed_form()->value(p), 0.0, 1e-14);
    // the linear term is still present before t = 1
    EXPECT_GT(std::abs(b.ux.closed_form()->value({0.0, 1.0, 1.0, 0.5})), 0.1);
}

TEST(Families, RandomVelocityIsSeeded) {
    const auto g = make_grid(8, 1.0);
    const auto a = random_velocity(g, 5, 0.3), b = random_velocity(g, 5, 0.3), c = random_velocity(g, 6, 0.3);
    for (int k = 0; k < 3; ++k) {
        const auto va = a[k].values(), vb = b[k].values(), vc = c[k].values();
        EXPECT_TRUE(std::equal(va.begin(), va.end(), vb.begin()));
        EXPECT_FALSE(std::equal(va.begin(), va.end(), vc.begin()));
    }
}

TEST(ReportIo, CsvAndManifest) {
    CsvTable t({"a", "b"});
    t.add({cell(0.1), cell(true)});
    EXPECT_EQ(t.text(), "a,b\n0.1,true\n");
    EXPECT_THROW(t.add({"x"}), Error);

    const auto dir = scratch("manifest");
    fs::create_directories(dir);
    std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
    const auto files = checksum_files(dir, {"abc.txt"});
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(files[0].sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(files[0].bytes, 3u);
    RunManifest m;
    m.subcommand = "x";
    m.files = files;
    m.checks = {{"c", true, "ok"}};
    const auto json = manifest_json(m);
    EXPECT_NE(json.find("\"sha256\": \"ba7816bf"), std::string::npos);
    EXPECT_NE(json.find("\"passed\": true"), std::string::npos);
    EXPECT_EQ(utc_timestamp().size(), 20u);
}

TEST(Experiments, TaylorGreenResiduals) {
    const auto dir = scratch("tg");
    const auto out = verify_residuals(config({"grid.N=16"}), dir);
    EXPECT_TRUE(out.passed());
    ASSERT_EQ(out.files, std::vector<std::string>{"residuals.csv"});
    EXPECT_EQ(slurp(dir / "residuals.csv").substr(0, 30), "name,N,L,t,l2,linf,params_hash");
}

TEST(Experiments, RandomFamilyHasNoResidual) {
    try {
        verify_residuals(config({"family.velocity=random"}), scratch("rand"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Validation);
    }
}

TEST(Experiments, BlowupReportReproducible) {
    const auto a = scratch("blowup_a"), b = scratch("blowup_b");
    const auto ra = blowup_report(config({}), a);
    blowup_report(config({}), b);
    EXPECT_TRUE(ra.passed());
    for (const auto& f : ra.files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Experiments, InequalityIndependentOfJobs) {
    const auto a = scratch("ineq_a"), b = scratch("ineq_b");
    const auto ra = inequality_report(config({"inequality.bumps=3", "inequality.nodes=32", "inequality.refine_nodes=48",
                                              "inequality.refine_tolerance=1e-3", "run.jobs=1"}),
                                      a);
    inequality_report(config({"inequality.bumps=3", "inequality.nodes=32", "inequality.refine_nodes=48",
                              "inequality.refine_tolerance=1e-3", "run.jobs=3"}),
                      b);
    EXPECT_TRUE(ra.passed());
    for (const auto& f : ra.files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Experiments, RandomDnsReproducible) {
    const auto a = scratch("dns_a"), b = scratch("dns_b");
    const std::vector<std::string> o{"family.velocity=random", "grid.N=8", "solver.dt=0.01", "solver.t_end=0.1",
                                     "solver.sample_every=2", "solver.snapshot_every=4", "run.seed=11"};
    const auto ra = run_dns(config(o), a);
    run_dns(config(o), b);
    EXPECT_TRUE(ra.passed());
    EXPECT_EQ(ra.files.size(), 1u + 3u * 3u);  // diagnostics + snapshots at steps 0, 4, 8
    for (const auto& f : ra.files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Experiments, SnapshotIntervalValidated) {
    EXPECT_THROW(run_dns(config({"solver.sample_every=3", "solver.snapshot_every=4"}), scratch("snap")), Error);
}

TEST(Experiments, WaveAndDump) {
    const auto dir = scratch("wave");
    EXPECT_TRUE(wave_check(config({"wave.c=2"}), dir).passed());
    const auto c_time = wave_check(config({"wave.c=2", "wave.form=c_time"}), dir);
    EXPECT_TRUE(c_time.passed());
    EXPECT_FALSE(c_time.notes.empty());
    const auto d = dump_fields(config({"grid.N=8", "dump.family=lattice", "dump.t=0.5"}), dir);
    EXPECT_EQ(d.files.size(), 3u);
    const auto back = read_pnsf1(dir / "uz.pnsf1");
    EXPECT_EQ(back.name, "uz");
    EXPECT_EQ(back.field.grid().n_modes(), 8);
    EXPECT_DOUBLE_EQ(back.time, 0.5);
}
