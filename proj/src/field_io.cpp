#include "strand/field_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "strand/errors.hpp"

namespace strand {

namespace fs = std::filesystem;

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_short(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::uint64_t checksum(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_real(const std::string& tok, const std::string& origin, int line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw IoError(origin, "line " + std::to_string(line) + ": cannot parse number '" + tok + "'");
    }
    return v;
}

long parse_int(const std::string& tok, const std::string& origin, int line) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw IoError(origin, "line " + std::to_string(line) + ": cannot parse integer '" + tok + "'");
    }
    return v;
}

std::string field_header(int components) {
    std::string h = "t_index,s_index,t,s";
    for (int c = 1; c <= components; ++c) h += ",c" + std::to_string(c);
    return h + "\n";
}

template <class T, int N, class Write>
std::string field_csv_impl(const Field<T>& f, Write write_components) {
    const Grid2& g = f.grid();
    std::string out = field_header(N);
    out.reserve(out.size() + g.size() * (N + 4) * 24);
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            out += std::to_string(it) + ',' + std::to_string(is) + ',' + format_real(g.t(it)) + ',' +
                   format_real(g.s(is));
            write_components(out, f(it, is));
            out += '\n';
        }
    }
    return out;
}

// Parses the data rows into flat arrays of N components, checking the index
// columns against the grid.
template <int N>
std::vector<std::array<double, N>> parse_field_rows(const std::string& text, const Grid2& g,
                                                    const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line + "\n" != field_header(N)) {
        throw IoError(origin, "unexpected header");
    }
    std::vector<std::array<double, N>> rows;
    rows.reserve(g.size());
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tok = split(line, ',');
        if (tok.size() != static_cast<std::size_t>(N + 4)) {
            throw IoError(origin, "line " + std::to_string(lineno) + ": expected " + std::to_string(N + 4) + " columns");
        }
        const std::size_t k = rows.size();
        const long it = parse_int(tok[0], origin, lineno);
        const long is = parse_int(tok[1], origin, lineno);
        if (k >= g.size() || g.index(static_cast<int>(it), static_cast<int>(is)) != k || it >= g.n_t ||
            is >= g.n_s) {
            throw IoError(origin, "line " + std::to_string(lineno) + ": rows out of order");
        }
        std::array<double, N> vals{};
        for (int c = 0; c < N; ++c) vals[c] = parse_real(tok[4 + c], origin, lineno);
        rows.push_back(vals);
    }
    if (rows.size() != g.size()) throw IoError(origin, "expected " + std::to_string(g.size()) + " rows");
    return rows;
}

}  // namespace

std::string field_csv(const VecField& f) {
    return field_csv_impl<Vec3, 3>(f, [](std::string& out, const Vec3& v) {
        for (int c = 0; c < 3; ++c) out += ',' + format_real(v[c]);
    });
}

std::string field_csv(const RotField& f) {
    return field_csv_impl<Rot3, 9>(f, [](std::string& out, const Rot3& r) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) out += ',' + format_real(r.matrix()(i, j));
        }
    });
}

VecField parse_vec_field_csv(const std::string& text, const Grid2& grid, const std::string& origin) {
    const auto rows = parse_field_rows<3>(text, grid, origin);
    VecField f(grid);
    for (std::size_t k = 0; k < rows.size(); ++k) f[k] = Vec3(rows[k][0], rows[k][1], rows[k][2]);
    return f;
}

RotField parse_rot_field_csv(const std::string& text, const Grid2& grid, const std::string& origin) {
    const auto rows = parse_field_rows<9>(text, grid, origin);
    RotField f(grid);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Mat3 m;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m(i, j) = rows[k][3 * i + j];
        }
        f[k] = Rot3::from_matrix(m);
    }
    return f;
}

std::string Manifest::text() const {
    std::string out = "# strand-reduce field manifest\n";
    out += "n_t " + std::to_string(grid.n_t) + "\n";
    out += "n_s " + std::to_string(grid.n_s) + "\n";
    out += "dt " + format_real(grid.dt) + "\n";
    out += "ds " + format_real(grid.ds) + "\n";
    out += "bc " + to_string(grid.bc_s) + "\n";
    for (const auto& [name, sum] : files) out += "file " + name + " " + hex(sum) + "\n";
    return out;
}

Manifest Manifest::parse(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int n_t = 0;
    int n_s = 0;
    double dt = 0.0;
    double ds = 0.0;
    Boundary bc = Boundary::Clamped;
    Manifest m;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto tok = split(line, ' ');
        if (tok[0] == "n_t" && tok.size() == 2) {
            n_t = static_cast<int>(parse_int(tok[1], origin, lineno));
        } else if (tok[0] == "n_s" && tok.size() == 2) {
            n_s = static_cast<int>(parse_int(tok[1], origin, lineno));
        } else if (tok[0] == "dt" && tok.size() == 2) {
            dt = parse_real(tok[1], origin, lineno);
        } else if (tok[0] == "ds" && tok.size() == 2) {
            ds = parse_real(tok[1], origin, lineno);
        } else if (tok[0] == "bc" && tok.size() == 2) {
            bc = parse_boundary(tok[1]);
        } else if (tok[0] == "file" && tok.size() == 3) {
            m.files[tok[1]] = std::stoull(tok[2], nullptr, 16);
        } else {
            throw IoError(origin, "line " + std::to_string(lineno) + ": unrecognised manifest entry");
        }
    }
    m.grid = Grid2::make(n_t, n_s, dt, ds, bc);
    return m;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << content;
    if (!out) throw IoError(path.string(), "write failed");
}

namespace {

Manifest load_or_create_manifest(const fs::path& dir, const Grid2& grid) {
    const fs::path path = dir / "manifest.txt";
    if (fs::exists(path)) return Manifest::parse(read_text(path), path.string());
    return Manifest{grid, {}};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
}

}  // namespace

void write_tracked_file(const fs::path& dir, const std::string& name, const std::string& content) {
    ensure_dir(dir);
    const fs::path manifest_path = dir / "manifest.txt";
    if (!fs::exists(manifest_path)) throw IoError(manifest_path.string(), "missing manifest");
    Manifest m = Manifest::parse(read_text(manifest_path), manifest_path.string());
    write_text(dir / name, content);
    m.files[name] = checksum(content);
    write_text(manifest_path, m.text());
}

void write_fields(const Stage1Section& s1, const fs::path& dir) {
    ensure_dir(dir);
    Manifest m{s1.grid(), {}};
    const std::array<std::pair<const char*, const VecField*>, 4> fields = {
        {{"rho.csv", &s1.rho}, {"theta.csv", &s1.theta}, {"Omega.csv", &s1.Omega}, {"omega.csv", &s1.omega}}};
    for (const auto& [name, field] : fields) {
        const std::string body = field_csv(*field);
        write_text(dir / name, body);
        m.files[name] = checksum(body);
    }
    write_text(dir / "manifest.txt", m.text());
}

void write_rotation_field(const RotField& lambda, const fs::path& dir) {
    ensure_dir(dir);
    Manifest m = load_or_create_manifest(dir, lambda.grid());
    const std::string body = field_csv(lambda);
    write_text(dir / "Lambda.csv", body);
    m.files["Lambda.csv"] = checksum(body);
    write_text(dir / "manifest.txt", m.text());
}

Stage1Section read_fields(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.txt";
    const Manifest m = Manifest::parse(read_text(manifest_path), manifest_path.string());
    auto load = [&](const std::string& name) {
        const fs::path path = dir / name;
        const std::string body = read_text(path);
        const auto entry = m.files.find(name);
        if (entry == m.files.end()) throw IoError(path.string(), "not listed in manifest");
        if (entry->second != checksum(body)) throw IoError(path.string(), "checksum mismatch");
        return parse_vec_field_csv(body, m.grid, path.string());
    };
    return Stage1Section{load("rho.csv"), load("theta.csv"), load("Omega.csv"), load("omega.csv")};
}

std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows) {
    std::string out =
        "t_index,t,interior,vertical,horizontal_rho,horizontal_theta,flatness_rotation,flatness_rotor,"
        "so3_total1,so3_total2,so3_total3,rotor_total1,rotor_total2,rotor_total3\n";
    for (const DiagnosticRow& r : rows) {
        out += std::to_string(r.t_index) + ',' + format_real(r.t) + ',' + (r.interior ? "1" : "0");
        for (double v : {r.vertical, r.horizontal_rho, r.horizontal_theta, r.flatness_rotation, r.flatness_rotor}) {
            out += ',' + format_real(v);
        }
        for (int c = 0; c < 3; ++c) out += ',' + format_real(r.so3_total[c]);
        for (int c = 0; c < 3; ++c) out += ',' + format_real(r.rotor_total[c]);
        out += '\n';
    }
    return out;
}

namespace {
constexpr std::array<const char*, 7> kSliceNames = {"rho", "u", "theta", "a", "v", "Omega", "omega"};
}

std::string state_slice_csv(const StateSlice& x) {
    std::string out = "s_index";
    for (const char* name : kSliceNames) {
        for (int c = 1; c <= 3; ++c) out += std::string(",") + name + std::to_string(c);
    }
    out += '\n';
    const std::array<const std::vector<Vec3>*, 7> comps = {&x.rho, &x.u, &x.theta, &x.a, &x.v, &x.Omega, &x.omega};
    for (std::size_t i = 0; i < x.size(); ++i) {
        out += std::to_string(i);
        for (const auto* comp : comps) {
            for (int c = 0; c < 3; ++c) out += ',' + format_real((*comp)[i][c]);
        }
        out += '\n';
    }
    return out;
}

StateSlice read_state_slice(const fs::path& path, int n_s) {
    const std::string origin = path.string();
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line + "\n" != state_slice_csv(StateSlice(0))) {
        throw IoError(origin, "unexpected header");
    }
    StateSlice x(static_cast<std::size_t>(n_s));
    std::array<std::vector<Vec3>*, 7> comps = {&x.rho, &x.u, &x.theta, &x.a, &x.v, &x.Omega, &x.omega};
    int lineno = 1;
    int count = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tok = split(line, ',');
        if (tok.size() != 22) throw IoError(origin, "line " + std::to_string(lineno) + ": expected 22 columns");
        const long i = parse_int(tok[0], origin, lineno);
        if (i != count || i >= n_s) throw IoError(origin, "line " + std::to_string(lineno) + ": bad s_index");
        for (std::size_t c = 0; c < comps.size(); ++c) {
            for (int k = 0; k < 3; ++k) {
                (*comps[c])[static_cast<std::size_t>(i)][k] = parse_real(tok[1 + 3 * c + k], origin, lineno);
            }
        }
        ++count;
    }
    if (count != n_s) throw IoError(origin, "expected " + std::to_string(n_s) + " rows, found " + std::to_string(count));
    return x;
}

}  // namespace strand
