#include "avseld/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "avseld/errors.hpp"

namespace avseld {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

[[noreturn]] void bad(const std::filesystem::path& path, const std::string& why) {
  throw data_error(path.string() + ": " + why);
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad(path, "cannot open file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    bad(path, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format_tag = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_off = 0, data_len = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_len = le32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) bad(path, "chunk extends past end of file");
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_len < 16) bad(path, "fmt chunk too short");
      const unsigned char* f = bytes.data() + body;
      format_tag = le16(f);
      channels = le16(f + 2);
      sample_rate = le32(f + 4);
      block_align = le16(f + 12);
      bits = le16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_off = body;
      data_len = chunk_len;
      have_data = true;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }
  if (!have_fmt) bad(path, "missing fmt chunk");
  if (!have_data) bad(path, "missing data chunk");
  if (format_tag != 1) bad(path, "unsupported format tag " + std::to_string(format_tag) +
                                     " (integer PCM only)");
  if (bits != 16 && bits != 24 && bits != 32) {
    bad(path, "unsupported bit depth " + std::to_string(bits));
  }
  if (channels == 0) bad(path, "zero channels");
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample) bad(path, "inconsistent block align");
  if (data_len % block_align != 0) bad(path, "data size is not a whole number of frames");

  WavData wav;
  wav.sample_rate = static_cast<int>(sample_rate);
  wav.channels = channels;
  const std::size_t frames = data_len / block_align;
  wav.samples.assign(channels, std::vector<double>(frames));
  const double full_scale = std::ldexp(1.0, static_cast<int>(bits) - 1);
  const unsigned char* p = bytes.data() + data_off;
  for (std::size_t f = 0; f < frames; ++f) {
    for (int c = 0; c < channels; ++c) {
      std::int32_t v = 0;
      if (bits == 16) {
        v = static_cast<std::int16_t>(le16(p));
      } else if (bits == 24) {
        v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
        if (v & 0x800000) v -= 0x1000000;
      } else {
        v = static_cast<std::int32_t>(le32(p));
      }
      wav.samples[c][f] = static_cast<double>(v) / full_scale;
      p += bytes_per_sample;
    }
  }
  return wav;
}

FoaClip read_foa_wav(const std::filesystem::path& path) {
  WavData wav = read_wav(path);
  if (wav.channels != kFoaChannels) {
    bad(path, "FOA clip must have 4 channels, got " + std::to_string(wav.channels));
  }
  if (wav.sample_rate != 24000) {
    bad(path, "FOA clip must be 24 kHz, got " + std::to_string(wav.sample_rate) + " Hz");
  }
  FoaClip clip;
  clip.sample_rate = wav.sample_rate;
  for (int c = 0; c < kFoaChannels; ++c) clip.channels[c] = std::move(wav.samples[c]);
  return clip;
}

void write_foa_wav(const FoaClip& clip, const std::filesystem::path& path) {
  const std::size_t n = clip.sample_count();
  for (const auto& ch : clip.channels) {
    if (ch.size() != n) throw validation_error("FOA channels have unequal lengths");
  }
  const std::uint32_t data_len = static_cast<std::uint32_t>(n * kFoaChannels * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put32(out, 36 + data_len);
  out += "WAVE";
  out += "fmt ";
  put32(out, 16);
  put16(out, 1);  // integer PCM
  put16(out, kFoaChannels);
  put32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put32(out, static_cast<std::uint32_t>(clip.sample_rate) * kFoaChannels * 2);
  put16(out, kFoaChannels * 2);
  put16(out, 16);
  out += "data";
  put32(out, data_len);
  for (std::size_t f = 0; f < n; ++f) {
    for (int c = 0; c < kFoaChannels; ++c) {
      const double s = std::clamp(clip.channels[c][f], -1.0, 1.0);
      const long q = std::lround(s * 32768.0);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(
                     std::clamp(q, -32768L, 32767L))));
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error(path.string() + ": cannot open for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw data_error(path.string() + ": write failed");
}

}  // namespace avseld
