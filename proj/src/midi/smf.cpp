#include "tomi/midi/smf.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace tomi {

void finalizeClip(MidiClipData& clip) {
  std::sort(clip.notes.begin(), clip.notes.end());
  int64_t last_end = 0;
  for (const NoteEvent& note : clip.notes) {
    last_end = std::max(last_end, note.onset_ticks + note.duration_ticks);
  }
  clip.ticks_per_quarter = kTicksPerQuarter;
  clip.length_bars = clip.notes.empty()
                         ? 0
                         : static_cast<int>((last_end + kTicksPerBar - 1) /
                                            kTicksPerBar);
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> bytes, size_t pos) : bytes_(bytes), pos_(pos) {}

  size_t pos() const { return pos_; }
  bool atEnd(size_t limit) const { return pos_ >= limit; }

  uint8_t u8() { return bytes_[pos_++]; }
  uint16_t u16() { return static_cast<uint16_t>(u8() << 8 | u8()); }
  uint32_t u32() {
    uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value = value << 8 | u8();
    return value;
  }

  bool has(size_t count, size_t limit) const { return pos_ + count <= limit; }

  /// Variable-length quantity; false if it overruns limit.
  bool varint(uint32_t& value, size_t limit) {
    value = 0;
    for (int i = 0; i < 4; ++i) {
      if (pos_ >= limit) return false;
      uint8_t byte = u8();
      value = value << 7 | (byte & 0x7f);
      if ((byte & 0x80) == 0) return true;
    }
    return false;
  }

  void skip(size_t count) { pos_ += count; }
  void rewind() { --pos_; }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_;
};

struct OpenNote {
  int64_t onset = 0;
  int velocity = 0;
};

SmfParseResult fail(size_t offset, std::string message) {
  SmfParseResult result;
  result.ok = false;
  result.error = std::move(message);
  result.error_offset = offset;
  return result;
}

}  // namespace

SmfParseResult parseMidiFile(std::span<const uint8_t> bytes) {
  if (bytes.size() < 14) return fail(0, "file too short for SMF header");
  ByteReader reader(bytes, 0);
  if (reader.u32() != 0x4d546864u) return fail(0, "missing MThd magic");
  uint32_t header_len = reader.u32();
  if (header_len < 6) return fail(4, "SMF header too short");
  uint16_t format = reader.u16();
  uint16_t num_tracks = reader.u16();
  uint16_t division = reader.u16();
  if (format > 1) return fail(8, "only SMF formats 0 and 1 supported");
  if (division & 0x8000) return fail(12, "SMPTE time division not supported");
  if (division == 0) return fail(12, "zero time division");
  reader.skip(header_len - 6);

  std::vector<NoteEvent> notes;

  for (uint16_t track = 0; track < num_tracks; ++track) {
    if (!reader.has(8, bytes.size())) {
      return fail(reader.pos(), "truncated track header");
    }
    if (reader.u32() != 0x4d54726bu) {
      return fail(reader.pos() - 4, "missing MTrk magic");
    }
    uint32_t track_len = reader.u32();
    size_t track_end = reader.pos() + track_len;
    if (track_end > bytes.size()) {
      return fail(reader.pos() - 4, "track length exceeds file");
    }

    int64_t tick = 0;
    uint8_t running_status = 0;
    // (channel, pitch) -> open note; a re-onset truncates the prior note.
    std::map<std::pair<int, int>, OpenNote> open;

    auto closeNote = [&](int channel, int pitch, int64_t end_tick) {
      auto it = open.find({channel, pitch});
      if (it == open.end()) return;
      int64_t duration = end_tick - it->second.onset;
      if (duration > 0) {
        notes.push_back({pitch, it->second.velocity, it->second.onset, duration});
      }
      open.erase(it);
    };

    while (!reader.atEnd(track_end)) {
      uint32_t delta = 0;
      if (!reader.varint(delta, track_end)) {
        return fail(reader.pos(), "truncated delta time");
      }
      tick += delta;
      if (reader.atEnd(track_end)) return fail(reader.pos(), "truncated event");

      uint8_t status = reader.u8();
      if (status < 0x80) {
        if (running_status == 0) {
          return fail(reader.pos() - 1, "data byte without running status");
        }
        reader.rewind();
        status = running_status;
      }

      if (status == 0xff) {  // meta
        if (reader.atEnd(track_end)) return fail(reader.pos(), "truncated meta");
        uint8_t type = reader.u8();
        (void)type;
        uint32_t length = 0;
        if (!reader.varint(length, track_end) ||
            !reader.has(length, track_end)) {
          return fail(reader.pos(), "truncated meta payload");
        }
        reader.skip(length);
        running_status = 0;
        continue;
      }
      if (status == 0xf0 || status == 0xf7) {  // sysex
        uint32_t length = 0;
        if (!reader.varint(length, track_end) ||
            !reader.has(length, track_end)) {
          return fail(reader.pos(), "truncated sysex payload");
        }
        reader.skip(length);
        running_status = 0;
        continue;
      }

      running_status = status;
      const uint8_t kind = status & 0xf0;
      const int channel = status & 0x0f;
      const size_t data_bytes = (kind == 0xc0 || kind == 0xd0) ? 1 : 2;
      if (!reader.has(data_bytes, track_end)) {
        return fail(reader.pos(), "truncated channel event");
      }
      uint8_t d1 = reader.u8();
      uint8_t d2 = data_bytes == 2 ? reader.u8() : 0;

      if (kind == 0x90 && d2 > 0) {
        closeNote(channel, d1, tick);  // re-onset truncates
        open[{channel, d1}] = {tick, d2};
      } else if (kind == 0x80 || (kind == 0x90 && d2 == 0)) {
        closeNote(channel, d1, tick);
      }
    }

    // Unterminated notes close at end of track.
    for (const auto& [key, note] : open) {
      int64_t duration = tick - note.onset;
      if (duration > 0) {
        notes.push_back({key.second, note.velocity, note.onset, duration});
      }
    }
    if (reader.pos() != track_end) {
      return fail(reader.pos(), "track data overran declared length");
    }
  }

  // Rescale to 480 TPQ.
  SmfParseResult result;
  result.ok = true;
  for (NoteEvent& note : notes) {
    if (division != kTicksPerQuarter) {
      int64_t end = note.onset_ticks + note.duration_ticks;
      note.onset_ticks = std::llround(static_cast<double>(note.onset_ticks) *
                                      kTicksPerQuarter / division);
      int64_t scaled_end = std::llround(static_cast<double>(end) *
                                        kTicksPerQuarter / division);
      note.duration_ticks = std::max<int64_t>(1, scaled_end - note.onset_ticks);
    }
    note.velocity = std::clamp(note.velocity, 1, 127);
    result.clip.notes.push_back(note);
  }
  finalizeClip(result.clip);
  return result;
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

namespace {

void putU16(std::vector<uint8_t>& out, uint16_t value) {
  out.push_back(static_cast<uint8_t>(value >> 8));
  out.push_back(static_cast<uint8_t>(value));
}

void putU32(std::vector<uint8_t>& out, uint32_t value) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(value >> shift));
  }
}

void putVarint(std::vector<uint8_t>& out, uint32_t value) {
  uint8_t stack[5];
  int count = 0;
  do {
    stack[count++] = static_cast<uint8_t>(value & 0x7f);
    value >>= 7;
  } while (value != 0);
  while (count > 1) out.push_back(stack[--count] | 0x80);
  out.push_back(stack[0]);
}

struct WireEvent {
  int64_t tick;
  int order;  // offs before ons at the same tick
  uint8_t status;
  uint8_t d1;
  uint8_t d2;
};

}  // namespace

std::vector<uint8_t> writeMidiFile(const MidiClipData& clip, double tempo_bpm) {
  std::vector<WireEvent> events;
  events.reserve(clip.notes.size() * 2);
  for (const NoteEvent& note : clip.notes) {
    const uint8_t pitch = static_cast<uint8_t>(std::clamp(note.pitch, 0, 127));
    const uint8_t velocity =
        static_cast<uint8_t>(std::clamp(note.velocity, 1, 127));
    events.push_back({note.onset_ticks, 1, 0x90, pitch, velocity});
    events.push_back({note.onset_ticks + note.duration_ticks, 0, 0x80, pitch, 64});
  }
  std::sort(events.begin(), events.end(), [](const WireEvent& a, const WireEvent& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.order != b.order) return a.order < b.order;
    return a.d1 < b.d1;
  });

  std::vector<uint8_t> track;
  // Tempo meta at tick 0.
  const uint32_t usec_per_quarter =
      static_cast<uint32_t>(std::llround(60e6 / tempo_bpm));
  putVarint(track, 0);
  track.push_back(0xff);
  track.push_back(0x51);
  track.push_back(0x03);
  track.push_back(static_cast<uint8_t>(usec_per_quarter >> 16));
  track.push_back(static_cast<uint8_t>(usec_per_quarter >> 8));
  track.push_back(static_cast<uint8_t>(usec_per_quarter));

  int64_t cursor = 0;
  for (const WireEvent& event : events) {
    putVarint(track, static_cast<uint32_t>(event.tick - cursor));
    cursor = event.tick;
    track.push_back(event.status);
    track.push_back(event.d1);
    track.push_back(event.d2);
  }
  // End of track.
  putVarint(track, 0);
  track.push_back(0xff);
  track.push_back(0x2f);
  track.push_back(0x00);

  std::vector<uint8_t> out;
  out.reserve(14 + 8 + track.size());
  putU32(out, 0x4d546864u);
  putU32(out, 6);
  putU16(out, 0);  // format 0
  putU16(out, 1);  // one track
  putU16(out, kTicksPerQuarter);
  putU32(out, 0x4d54726bu);
  putU32(out, static_cast<uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

}  // namespace tomi
