#ifndef DDMX_IO_HPP
#define DDMX_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ddmx/dynamics.hpp"
#include "ddmx/integrator.hpp"
#include "ddmx/verification.hpp"

namespace ddmx {

static_assert(std::endian::native == std::endian::little,
              "the DDMX snapshot format is little-endian");

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Write-temp-then-rename; partial files are never observable.
inline void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw io_error("short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// DDMX field snapshots: magic "DDMX", u32 format version, u32 N, f64 L,
// f64 t, then 7 planes (rho, E1, E2, E3, B1, B2, B3), each N*N doubles,
// little-endian, row-major.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t snapshot_format_version = 1;

inline void write_snapshot(const std::filesystem::path& path, const State& s) {
    const Grid& g = s.grid();
    std::string bytes;
    bytes.reserve(24 + 7 * static_cast<size_t>(g.size_physical()) * sizeof(double));
    bytes.append("DDMX", 4);
    auto put = [&bytes](const void* p, size_t n) {
        bytes.append(reinterpret_cast<const char*>(p), n);
    };
    const std::uint32_t ver = snapshot_format_version;
    const std::uint32_t n = static_cast<std::uint32_t>(g.n());
    const double length = g.length(), t = s.time;
    put(&ver, 4);
    put(&n, 4);
    put(&length, 8);
    put(&t, 8);
    const ScalarField* planes[7] = {&s.rho,     &s.E.c1(), &s.E.c2(), &s.E.c3(),
                                    &s.B.c1(), &s.B.c2(), &s.B.c3()};
    for (const ScalarField* p : planes) {
        const auto v = p->values();
        put(v.data(), v.size() * sizeof(double));
    }
    atomic_write(path, bytes);
}

inline State read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open snapshot '" + path.string() + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "DDMX", 4) != 0)
        throw io_error("'" + path.string() + "' is not a DDMX snapshot");
    std::uint32_t ver = 0, n = 0;
    double length = 0.0, t = 0.0;
    in.read(reinterpret_cast<char*>(&ver), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&length), 8);
    in.read(reinterpret_cast<char*>(&t), 8);
    if (!in) throw io_error("truncated snapshot header in '" + path.string() + "'");
    if (ver != snapshot_format_version)
        throw io_error("unsupported snapshot format version " + std::to_string(ver));
    const Grid g(static_cast<int>(n), length);
    std::vector<ScalarField> planes;
    planes.reserve(7);
    for (int p = 0; p < 7; ++p) {
        std::vector<double> v(static_cast<size_t>(g.size_physical()));
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!in) throw io_error("truncated plane " + std::to_string(p) + " in '" +
                                path.string() + "'");
        planes.push_back(ScalarField::from_physical(g, std::move(v)));
    }
    return State{planes[0], VectorField3(planes[1], planes[2], planes[3]),
                 VectorField3(planes[4], planes[5], planes[6]), t};
}

// ---------------------------------------------------------------------------
// Time-series CSV.  Column order is the stable contract.
// ---------------------------------------------------------------------------

inline const char* timeseries_header() {
    return "t,l2_rho,l2_E,l2_B,h1_rho,h1_E,h1_B,grad_rho_l2,hess_rho_l2,linf_rho,"
           "gauss_e_residual,div_b_residual,energy,dissipation_integral,"
           "I1,I2,I3,I4,J1,J2,J3,J4,J5,J6";
}

inline std::string format_timeseries(const TrajectoryRecord& traj) {
    std::ostringstream os;
    os << timeseries_header() << "\n";
    char buf[40];
    auto put = [&](double x, bool first = false) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        if (!first) os << ',';
        os << buf;
    };
    for (const auto& r : traj.rows) {
        put(r.t, true);
        put(r.l2_rho);
        put(r.l2_e);
        put(r.l2_b);
        put(r.h1_rho);
        put(r.h1_e);
        put(r.h1_b);
        put(r.grad_rho_l2);
        put(r.hess_rho_l2);
        put(r.linf_rho);
        put(r.gauss_e_residual);
        put(r.div_b_residual);
        put(r.energy);
        put(r.dissipation_integral);
        put(r.er.i1);
        put(r.er.i2);
        put(r.er.i3);
        put(r.er.i4);
        put(r.h1.j1);
        put(r.h1.j2);
        put(r.h1.j3);
        put(r.h1.j4);
        put(r.h1.j5);
        put(r.h1.j6);
        os << "\n";
    }
    return os.str();
}

inline void write_timeseries(const std::filesystem::path& path, const TrajectoryRecord& traj) {
    atomic_write(path, format_timeseries(traj));
}

/// Check reports as CSV rows: name, lhs, rhs, margin, passed.
inline std::string format_check_reports(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << "name,lhs,rhs,margin,passed\n";
    char buf[40];
    for (const auto& r : reports) {
        os << r.name;
        for (double x : {r.lhs, r.rhs, r.margin}) {
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            os << ',' << buf;
        }
        os << ',' << (r.passed ? "true" : "false") << "\n";
    }
    return os.str();
}

inline void write_check_reports(const std::filesystem::path& path,
                                const std::vector<CheckReport>& reports) {
    atomic_write(path, format_check_reports(reports));
}

} // namespace ddmx

#endif
