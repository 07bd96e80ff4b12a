#include "sdrlink/waveform_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sdrlink {

namespace {

constexpr char kMagic[8] = {'S', 'D', 'R', 'W', 'A', 'V', '0', '1'};

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

} // namespace

void write_waveform(const std::string& path, const SampleBuffer& x,
                    std::uint32_t mode, std::uint32_t frame_count) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_waveform: cannot open " + path);
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, mode);
    put<double>(os, x.sample_rate_hz);
    put<std::uint32_t>(os, frame_count);
    put<std::uint64_t>(os, x.samples.size());
    for (const cplx& s : x.samples) {
        put<float>(os, static_cast<float>(s.real()));
        put<float>(os, static_cast<float>(s.imag()));
    }
    if (!os) throw std::runtime_error("write_waveform: write failed for " + path);
}

SampleBuffer read_waveform(const std::string& path, WaveformHeader* header) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_waveform: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("read_waveform: bad magic in " + path);
    WaveformHeader h;
    h.mode = get<std::uint32_t>(is);
    h.sample_rate_hz = get<double>(is);
    h.frame_count = get<std::uint32_t>(is);
    const auto count = get<std::uint64_t>(is);
    SampleBuffer x;
    x.sample_rate_hz = h.sample_rate_hz;
    x.samples.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const float re = get<float>(is);
        const float im = get<float>(is);
        x.samples.emplace_back(re, im);
    }
    if (!is) throw std::runtime_error("read_waveform: truncated file " + path);
    if (header) *header = h;
    return x;
}

} // namespace sdrlink
