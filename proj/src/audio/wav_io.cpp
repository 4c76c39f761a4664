#include "tomi/audio/wav_io.h"

#include <cmath>
#include <cstring>

#include "tomi/util/file_io.h"

namespace tomi {

namespace {

void putU32le(std::vector<uint8_t>& out, uint32_t value) {
  out.push_back(static_cast<uint8_t>(value));
  out.push_back(static_cast<uint8_t>(value >> 8));
  out.push_back(static_cast<uint8_t>(value >> 16));
  out.push_back(static_cast<uint8_t>(value >> 24));
}

void putU16le(std::vector<uint8_t>& out, uint16_t value) {
  out.push_back(static_cast<uint8_t>(value));
  out.push_back(static_cast<uint8_t>(value >> 8));
}

uint32_t readU32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t readU16le(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

}  // namespace

int16_t floatToPcm16(float sample) {
  const long value = std::lround(static_cast<double>(sample) * 32768.0);
  if (value > 32767) return 32767;
  if (value < -32768) return -32768;
  return static_cast<int16_t>(value);
}

std::vector<uint8_t> encodeWavPcm16(const AudioBuffer& buffer) {
  const uint32_t data_bytes = static_cast<uint32_t>(buffer.samples.size() * 2);
  const uint16_t channels = static_cast<uint16_t>(buffer.channels);
  const uint32_t byte_rate =
      static_cast<uint32_t>(buffer.sample_rate) * channels * 2;
  const uint16_t block_align = static_cast<uint16_t>(channels * 2);

  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  putU32le(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  putU32le(out, 16);
  putU16le(out, 1);  // PCM
  putU16le(out, channels);
  putU32le(out, static_cast<uint32_t>(buffer.sample_rate));
  putU32le(out, byte_rate);
  putU16le(out, block_align);
  putU16le(out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  putU32le(out, data_bytes);
  for (float sample : buffer.samples) {
    const int16_t pcm = floatToPcm16(sample);
    out.push_back(static_cast<uint8_t>(pcm & 0xff));
    out.push_back(static_cast<uint8_t>((pcm >> 8) & 0xff));
  }
  return out;
}

bool writeWavPcm16(const std::string& path, const AudioBuffer& buffer) {
  return writeBinaryFile(path, encodeWavPcm16(buffer));
}

std::optional<AudioBuffer> readWavFile(const std::string& path) {
  auto bytes = readBinaryFile(path);
  if (!bytes || bytes->size() < 44) return std::nullopt;
  const uint8_t* data = bytes->data();
  if (std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0) {
    return std::nullopt;
  }

  AudioBuffer buffer;
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes->size()) {
    const char* chunk_id = reinterpret_cast<const char*>(data + pos);
    const uint32_t chunk_size = readU32le(data + pos + 4);
    const size_t body = pos + 8;
    if (body + chunk_size > bytes->size()) return std::nullopt;

    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      if (chunk_size < 16) return std::nullopt;
      const uint16_t format = readU16le(data + body);
      const uint16_t bits = readU16le(data + body + 14);
      if (format != 1 || bits != 16) return std::nullopt;  // PCM16 only
      buffer.channels = readU16le(data + body + 2);
      buffer.sample_rate = static_cast<int>(readU32le(data + body + 4));
      if (buffer.channels < 1 || buffer.channels > 2) return std::nullopt;
      have_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      if (!have_fmt) return std::nullopt;
      const size_t sample_count = chunk_size / 2;
      buffer.samples.resize(sample_count);
      for (size_t i = 0; i < sample_count; ++i) {
        const int16_t pcm = static_cast<int16_t>(
            readU16le(data + body + i * 2));
        buffer.samples[i] = pcm16ToFloat(pcm);
      }
      return buffer;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  return std::nullopt;
}

std::vector<float> monoMixdown(const AudioBuffer& buffer) {
  if (buffer.channels <= 1) return buffer.samples;
  const size_t frames = buffer.frameCount();
  std::vector<float> mono(frames);
  for (size_t i = 0; i < frames; ++i) {
    float sum = 0.0f;
    for (int c = 0; c < buffer.channels; ++c) {
      sum += buffer.samples[i * buffer.channels + c];
    }
    mono[i] = sum / static_cast<float>(buffer.channels);
  }
  return mono;
}

}  // namespace tomi
