#pragma once

// Binary field snapshots.
//
// Layout (little-endian):
//   magic   "WSCT"           4 bytes
//   version u32              currently 1
//   n       u32
//   M       u32
//   L       f64
//   repr    u8               0 = physical, 1 = spectral
//   payload M^n complex samples, interleaved (re, im) f64, row-major x1..xn

#include <cstdint>
#include <cstring>
#include <fstream>

#include "wavescatter/field.hpp"

namespace wsct {

inline constexpr std::uint32_t kSnapshotVersion = 1;

inline void write_snapshot(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    const char magic[4] = {'W', 'S', 'C', 'T'};
    out.write(magic, 4);
    auto put_u32 = [&out](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    put_u32(kSnapshotVersion);
    put_u32(static_cast<std::uint32_t>(f.grid().dim()));
    put_u32(static_cast<std::uint32_t>(f.grid().points_per_axis()));
    double L = f.grid().half_length();
    out.write(reinterpret_cast<const char*>(&L), 8);
    std::uint8_t repr = f.repr() == Repr::physical ? 0 : 1;
    out.write(reinterpret_cast<const char*>(&repr), 1);
    for (const auto& v : f.values()) {
        double re = v.real(), im = v.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!out) throw std::runtime_error("write_snapshot: short write to " + path);
}

inline Field read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "WSCT", 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path);
    auto get_u32 = [&in]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    std::uint32_t version = get_u32();
    if (version != kSnapshotVersion)
        throw std::runtime_error("read_snapshot: unsupported version in " + path);
    std::uint32_t n = get_u32();
    std::uint32_t m = get_u32();
    double L = 0.0;
    in.read(reinterpret_cast<char*>(&L), 8);
    std::uint8_t repr = 0;
    in.read(reinterpret_cast<char*>(&repr), 1);
    GridSpec g(static_cast<int>(n), static_cast<int>(m), L);
    std::vector<cplx> values(g.size());
    for (auto& v : values) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        v = cplx{re, im};
    }
    if (!in) throw std::runtime_error("read_snapshot: truncated payload in " + path);
    return Field(g, repr == 0 ? Repr::physical : Repr::spectral, std::move(values));
}

} // namespace wsct
