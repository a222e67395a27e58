// Binary field snapshots: complex wave function on a uniform grid.
//
// Layout (little-endian): magic "FRSE", u32 version = 1, u64 n,
// f64 x_min, f64 x_max, then n * (f64 re, f64 im).
#ifndef FRSE_IO_SNAPSHOT_HPP
#define FRSE_IO_SNAPSHOT_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "../core.hpp"

namespace frse {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts need swaps");

struct Snapshot {
    Grid grid;
    cvec psi;
};

inline void write_snapshot(const std::string& path, const Grid& g, const cvec& psi) {
    if (psi.size() != g.n)
        throw std::invalid_argument("snapshot: field size does not match grid");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path);
    const char magic[4] = {'F', 'R', 'S', 'E'};
    out.write(magic, 4);
    const std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), 4);
    const std::uint64_t n = g.n;
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&g.x_min), 8);
    out.write(reinterpret_cast<const char*>(&g.x_max), 8);
    for (const cplx& c : psi) {
        const double re = c.real(), im = c.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!out) throw std::runtime_error("snapshot: short write to " + path);
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FRSE", 4) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (version != 1)
        throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
    std::uint64_t n = 0;
    Snapshot s;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&s.grid.x_min), 8);
    in.read(reinterpret_cast<char*>(&s.grid.x_max), 8);
    s.grid.n = n;
    s.psi.resize(n);
    for (auto& c : s.psi) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        c = {re, im};
    }
    if (!in) throw std::runtime_error("snapshot: truncated file " + path);
    return s;
}

}  // namespace frse

#endif
