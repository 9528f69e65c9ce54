#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "strand/config.hpp"
#include "strand/errors.hpp"
#include "strand/field_io.hpp"
#include "strand/synthetic.hpp"

using namespace strand;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(# twist pulse on a clamped strand
[grid]
n_s = 32
n_t = 101
length = 1.0
duration = 0.5
bc = clamped

[inertia]
I = diag 1 1.5 2
K = 0.3 0 0  0 0.2 0  0 0 0.4

[potential]
C = diag 1 1 0.5
D = diag 0.2 0.2 0.2
kappa = 1
c0 = 1

[init]
preset = twistpulse
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

// Parses and returns the ConfigError (key, line) it raises.
std::pair<std::string, int> config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return {e.key(), e.line()};
    }
    ADD_FAILURE() << "no ConfigError";
    return {"", -1};
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("strand_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Config, MinimalFileUsesSchemeDefaults) {
    const SimConfig cfg = parse_config(kMinimal);
    EXPECT_EQ(cfg.grid.n_s, 32);
    EXPECT_EQ(cfg.grid.n_t, 101);
    EXPECT_DOUBLE_EQ(cfg.grid.ds, 1.0 / 31);
    EXPECT_DOUBLE_EQ(cfg.grid.dt, 0.005);
    EXPECT_EQ(cfg.grid.bc_s, Boundary::Clamped);
    EXPECT_EQ(cfg.scheme, Scheme::RK4);
    EXPECT_EQ(cfg.reortho_every, 16);
    EXPECT_EQ(cfg.preset, Preset::TwistPulse);
    EXPECT_EQ(cfg.params.inertia_body, Mat3(Vec3(1, 1.5, 2).asDiagonal()));
    EXPECT_EQ(cfg.params.inertia_rotor, Mat3(Vec3(0.3, 0.2, 0.4).asDiagonal()));
}

TEST(Config, PeriodicSpacingAndScheme) {
    std::string text = replace(kMinimal, "bc = clamped", "bc = periodic");
    text += "[scheme]\nname = midpoint\nreortho_every = 4\n";
    const SimConfig cfg = parse_config(text);
    EXPECT_DOUBLE_EQ(cfg.grid.ds, 1.0 / 32);
    EXPECT_EQ(cfg.scheme, Scheme::Midpoint);
    EXPECT_EQ(cfg.reortho_every, 4);
}

TEST(Config, DiagonalMatrixSyntax) {
    EXPECT_EQ(parse_matrix("diag 1 2 3", "inertia.I", 1), Mat3(Vec3(1, 2, 3).asDiagonal()));
    Mat3 m;
    m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    EXPECT_EQ(parse_matrix("1 2 3 4 5 6 7 8 9", "inertia.I", 1), m);
    EXPECT_THROW(parse_matrix("diag 1 2", "inertia.I", 1), ConfigError);
    EXPECT_THROW(parse_matrix("1 2 3", "inertia.I", 1), ConfigError);
}

TEST(Config, ErrorsNameKeyAndLine) {
    EXPECT_EQ(config_error(replace(kMinimal, "kappa = 1", "kappa = -1")), std::make_pair(std::string("potential.kappa"), 16));
    EXPECT_EQ(config_error(replace(kMinimal, "c0 = 1", "c0 = 1\nfoo = 2")), std::make_pair(std::string("potential.foo"), 18));
    EXPECT_EQ(config_error(replace(kMinimal, "[init]", "[bogus]")).first, "bogus");
    EXPECT_EQ(config_error(replace(kMinimal, "n_t = 101", "n_t = 101\nn_t = 102")), std::make_pair(std::string("grid.n_t"), 5));
    EXPECT_EQ(config_error(replace(kMinimal, "duration = 0.5\n", "")).first, "grid.duration");
    EXPECT_EQ(config_error(replace(kMinimal, "length = 1.0", "length = one")), std::make_pair(std::string("grid.length"), 5));
    EXPECT_EQ(config_error(replace(kMinimal, "I = diag 1 1.5 2", "I = diag 1 -1 2")).first, "inertia.I");
    EXPECT_EQ(config_error(replace(kMinimal, "preset = twistpulse", "preset = spiral")).first, "init.preset");
    EXPECT_EQ(config_error(replace(kMinimal, "preset = twistpulse", "preset = static\nfile = x.csv")).first, "init.file");
    EXPECT_EQ(config_error(replace(kMinimal, "bc = clamped", "bc = open")).first, "grid.bc");
    EXPECT_EQ(config_error(replace(kMinimal, "C = diag 1 1 0.5", "C =")).first, "potential.C");
}

TEST(Config, StabilityGuardNamesTimeSteps) {
    EXPECT_EQ(config_error(replace(kMinimal, "n_t = 101", "n_t = 11")).first, "grid.n_t");
}

TEST(Config, EchoRoundTrips) {
    const SimConfig a = parse_config(kMinimal);
    const SimConfig b = parse_config(echo_config(a));
    EXPECT_EQ(a.grid, b.grid);
    EXPECT_EQ(a.params.inertia_body, b.params.inertia_body);
    EXPECT_EQ(a.params.pot_C, b.params.pot_C);
    EXPECT_EQ(a.params.pot_kappa, b.params.pot_kappa);
    EXPECT_EQ(a.preset, b.preset);
    EXPECT_EQ(echo_config(a), echo_config(b));
}

TEST(Config, InitFileIsRelativeToConfig) {
    const fs::path dir = scratch_dir("config_rel");
    write_text(dir / "run.cfg", replace(kMinimal, "preset = twistpulse", "file = start.csv"));
    const SimConfig cfg = read_config(dir / "run.cfg");
    EXPECT_EQ(fs::path(cfg.init_file), dir / "start.csv");
    EXPECT_THROW(read_config(dir / "missing.cfg"), ConfigError);
}

TEST(FieldIo, ZeroFieldOnTwoByTwoGrid) {
    const Grid2 g = Grid2::make(3, 3, 0.5, 0.25, Boundary::Clamped);
    const std::string csv = field_csv(VecField(g));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t_index,s_index,t,s,c1,c2,c3");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_NE(csv.find("\n1,2,0.5,0.5,0,0,0\n"), std::string::npos);
    const std::string rot = field_csv(RotField(g));
    EXPECT_EQ(rot.substr(0, rot.find('\n')), "t_index,s_index,t,s,c1,c2,c3,c4,c5,c6,c7,c8,c9");
    EXPECT_NE(rot.find("\n0,0,0,0,1,0,0,0,1,0,0,0,1\n"), std::string::npos);
}

TEST(FieldIo, RealsRoundTripExactly) {
    std::mt19937_64 rng(61);
    const Grid2 g = Grid2::make(5, 7, 0.1, 1.0 / 3.0, Boundary::Periodic);
    VecField f(g);
    for (Vec3& v : f.values()) v = random_vec(rng, 1e3) / 7.0;
    f[3] = Vec3(1e-300, -0.0, 5e-324);
    const VecField back = parse_vec_field_csv(field_csv(f), g, "mem");
    EXPECT_EQ(back.values(), f.values());
    EXPECT_EQ(field_csv(back), field_csv(f));

    RotField r(g);
    for (Rot3& x : r.values()) x = random_rotation(rng);
    EXPECT_EQ(field_csv(parse_rot_field_csv(field_csv(r), g, "mem")), field_csv(r));
}

TEST(FieldIo, ParserRejectsMalformedInput) {
    const Grid2 g = Grid2::make(3, 3, 0.5, 0.5, Boundary::Clamped);
    const std::string good = field_csv(VecField(g));
    EXPECT_THROW(parse_vec_field_csv("x,y\n", g, "mem"), IoError);
    EXPECT_THROW(parse_vec_field_csv(replace(good, "\n0,1,", "\n0,2,"), g, "mem"), IoError);
    EXPECT_THROW(parse_vec_field_csv(good.substr(0, good.rfind('\n', good.size() - 2) + 1), g, "mem"), IoError);
    EXPECT_THROW(parse_vec_field_csv(replace(good, ",0,0,0\n", ",0,zero,0\n"), g, "mem"), IoError);
}

TEST(FieldIo, ManifestTracksEveryChange) {
    std::mt19937_64 rng(62);
    const Grid2 g = Grid2::make(4, 5, 0.1, 0.2, Boundary::Clamped);
    Stage1Section s{VecField(g), VecField(g), VecField(g), VecField(g)};
    for (VecField* f : {&s.rho, &s.theta, &s.Omega, &s.omega})
        for (Vec3& v : f->values()) v = random_vec(rng);

    const fs::path a = scratch_dir("manifest_a");
    const fs::path b = scratch_dir("manifest_b");
    write_fields(s, a);
    write_fields(s, b);
    const Manifest ma = Manifest::parse(read_text(a / "manifest.txt"), "a");
    EXPECT_EQ(read_text(a / "manifest.txt"), read_text(b / "manifest.txt"));
    EXPECT_EQ(ma.grid, g);
    EXPECT_EQ(ma.files.size(), 4u);

    s.Omega(2, 3).x() = std::nextafter(s.Omega(2, 3).x(), 10.0);
    write_fields(s, b);
    const Manifest mb = Manifest::parse(read_text(b / "manifest.txt"), "b");
    for (const auto& [name, sum] : ma.files) {
        if (name == "Omega.csv") {
            EXPECT_NE(sum, mb.files.at(name));
        } else {
            EXPECT_EQ(sum, mb.files.at(name)) << name;
        }
    }

    const Stage1Section back = read_fields(b);
    EXPECT_EQ(back.Omega.values(), s.Omega.values());

    write_text(b / "rho.csv", replace(read_text(b / "rho.csv"), "\n0,0,", "\n0,0,0"));
    EXPECT_THROW(read_fields(b), IoError);
}

TEST(FieldIo, TrackedFilesAndRotationField) {
    const Grid2 g = Grid2::make(3, 4, 0.1, 0.2, Boundary::Clamped);
    const fs::path dir = scratch_dir("tracked");
    EXPECT_THROW(write_tracked_file(dir, "note.txt", "x"), IoError);
    write_fields({VecField(g), VecField(g), VecField(g), VecField(g)}, dir);
    write_tracked_file(dir, "note.txt", "hello\n");
    write_rotation_field(RotField(g), dir);
    const Manifest m = Manifest::parse(read_text(dir / "manifest.txt"), "m");
    EXPECT_EQ(m.files.at("note.txt"), checksum("hello\n"));
    EXPECT_EQ(m.files.at("Lambda.csv"), checksum(read_text(dir / "Lambda.csv")));
}

TEST(FieldIo, StateSliceRoundTrip) {
    std::mt19937_64 rng(63);
    StateSlice x(6);
    for (auto* f : {&x.rho, &x.u, &x.theta, &x.a, &x.v, &x.Omega, &x.omega})
        for (Vec3& e : *f) e = random_vec(rng);
    const fs::path dir = scratch_dir("slice");
    write_text(dir / "init.csv", state_slice_csv(x));
    const StateSlice y = read_state_slice(dir / "init.csv", 6);
    EXPECT_EQ(state_slice_csv(y), state_slice_csv(x));
    EXPECT_EQ(y.omega, x.omega);
    EXPECT_THROW(read_state_slice(dir / "init.csv", 7), IoError);
}

TEST(FieldIo, ChecksumIsFnv1a) {
    EXPECT_EQ(checksum(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(checksum("a"), 0xaf63dc4c8601ec8cULL);
}
