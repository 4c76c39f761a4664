#include "tomi/render/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "tomi/dsp/kernels.h"
#include "tomi/dsp/stretch.h"

namespace tomi {

namespace {

double oscillatorSample(OscillatorShape shape, double phase_cycles) {
  const double t = phase_cycles - std::floor(phase_cycles);
  switch (shape) {
    case OscillatorShape::Sine:
      return std::sin(2.0 * std::numbers::pi * t);
    case OscillatorShape::Saw:
      return 2.0 * t - 1.0;
    case OscillatorShape::Square:
      return t < 0.5 ? 1.0 : -1.0;
    case OscillatorShape::Triangle:
      return 1.0 - 4.0 * std::fabs(t - 0.5);
  }
  return 0.0;
}

double heldLevel(const AdsrParams& adsr, double t) {
  if (t < adsr.attack_seconds) {
    return adsr.attack_seconds > 0.0 ? t / adsr.attack_seconds : 1.0;
  }
  const double after_attack = t - adsr.attack_seconds;
  if (after_attack < adsr.decay_seconds) {
    return 1.0 - (1.0 - adsr.sustain_level) * (after_attack / adsr.decay_seconds);
  }
  return adsr.sustain_level;
}

double adsrLevel(const AdsrParams& adsr, int64_t sample, int64_t gate_samples,
                 int sample_rate) {
  const double t = static_cast<double>(sample) / sample_rate;
  const double gate = static_cast<double>(gate_samples) / sample_rate;
  if (sample >= gate_samples) {
    const double after = t - gate;
    if (after >= adsr.release_seconds || adsr.release_seconds <= 0.0) return 0.0;
    return heldLevel(adsr, gate) * (1.0 - after / adsr.release_seconds);
  }
  return heldLevel(adsr, t);
}

double noteFrequency(int pitch) {
  return 440.0 * std::pow(2.0, (pitch - 69) / 12.0);
}

void renderNote(std::vector<float>& track, int64_t start_sample,
                const NoteEvent& note, const InstrumentPreset& preset,
                int sample_rate, double tick_sec) {
  const int64_t gate_samples =
      std::llround(static_cast<double>(note.duration_ticks) * tick_sec * sample_rate);
  const int64_t total_samples =
      gate_samples + std::llround(preset.adsr.release_seconds * sample_rate);
  const double frequency = noteFrequency(note.pitch);
  const double amplitude = preset.gain * (note.velocity / 127.0);

  for (int64_t k = 0; k < total_samples; ++k) {
    const int64_t index = start_sample + k;
    if (index < 0 || index >= static_cast<int64_t>(track.size())) continue;
    const double phase = frequency * static_cast<double>(k) / sample_rate;
    const double envelope = adsrLevel(preset.adsr, k, gate_samples, sample_rate);
    track[static_cast<size_t>(index)] += static_cast<float>(
        amplitude * envelope * oscillatorSample(preset.oscillator, phase));
  }
}

struct PreparedAudio {
  std::vector<float> samples;  // mono at the render rate, stretched
};

}  // namespace

SynthResult synthesize(const Arrangement& arrangement,
                       const std::map<std::string, int>& track_presets,
                       const RenderConfig& config) {
  SynthResult result;
  const int sr = config.sample_rate;
  const double tempo = arrangement.tempo_bpm;
  const double bar_sec = barSeconds(tempo);
  const double tick_sec = tickSeconds(tempo);

  auto instanceStartSample = [&](int instance_index) -> int64_t {
    const SectionInstance& instance =
        arrangement.timeline.instances[static_cast<size_t>(instance_index)];
    return std::llround(instance.start_bar * bar_sec * sr);
  };

  // Audio sources prepared once per (path, stretch ratio).
  std::map<std::pair<std::string, double>, PreparedAudio> audio_cache;
  auto prepare = [&](const AudioRegionDesc& region) -> const PreparedAudio* {
    const auto key = std::make_pair(region.path, region.stretch_ratio);
    auto it = audio_cache.find(key);
    if (it != audio_cache.end()) return &it->second;
    auto wav = readWavFile(region.path);
    if (!wav) return nullptr;
    PreparedAudio prepared;
    prepared.samples = monoMixdown(*wav);
    if (wav->sample_rate != sr) {
      prepared.samples = dsp::resampleLinear(prepared.samples, wav->sample_rate, sr);
    }
    if (region.stretch_ratio != 1.0) {
      prepared.samples =
          dsp::stretchOverlapAdd(prepared.samples, region.stretch_ratio, sr);
    }
    return &audio_cache.emplace(key, std::move(prepared)).first->second;
  };

  // First pass: full buffer length including release and ring-out tails.
  const int64_t timeline_samples =
      std::llround(arrangement.timeline.total_bars * bar_sec * sr);
  int64_t buffer_len = timeline_samples;
  for (const PlacedMidiClip& placement : arrangement.midi_placements) {
    const int preset_id = track_presets.contains(placement.track)
                              ? track_presets.at(placement.track)
                              : 4;
    const InstrumentPreset& preset = presetById(preset_id);
    const int64_t base = instanceStartSample(placement.instance_index);
    for (const NoteEvent& note : placement.notes) {
      const int64_t end =
          base + std::llround(note.onset_ticks * tick_sec * sr) +
          std::llround(note.duration_ticks * tick_sec * sr) +
          std::llround(preset.adsr.release_seconds * sr);
      buffer_len = std::max(buffer_len, end);
    }
  }
  for (const PlacedAudioClip& placement : arrangement.audio_placements) {
    const int64_t base = instanceStartSample(placement.instance_index);
    const int64_t end = base +
                        std::llround(placement.region.start_seconds * sr) +
                        std::llround(placement.region.region_seconds * sr);
    buffer_len = std::max(buffer_len, end);
  }

  // Render per track, then mix in sorted-name order.
  std::set<std::string> track_names;
  for (const PlacedMidiClip& placement : arrangement.midi_placements) {
    track_names.insert(placement.track);
  }
  for (const PlacedAudioClip& placement : arrangement.audio_placements) {
    track_names.insert(placement.track);
  }

  std::vector<float> master(static_cast<size_t>(buffer_len), 0.0f);
  for (const std::string& track_name : track_names) {
    std::vector<float> track(static_cast<size_t>(buffer_len), 0.0f);

    for (const PlacedMidiClip& placement : arrangement.midi_placements) {
      if (placement.track != track_name) continue;
      const int preset_id = track_presets.contains(track_name)
                                ? track_presets.at(track_name)
                                : 4;
      const InstrumentPreset& preset = presetById(preset_id);
      const int64_t base = instanceStartSample(placement.instance_index);
      for (const NoteEvent& note : placement.notes) {
        const int64_t note_start =
            base + std::llround(note.onset_ticks * tick_sec * sr);
        renderNote(track, note_start, note, preset, sr, tick_sec);
      }
    }

    for (const PlacedAudioClip& placement : arrangement.audio_placements) {
      if (placement.track != track_name) continue;
      const AudioRegionDesc& region = placement.region;
      const PreparedAudio* prepared = prepare(region);
      if (prepared == nullptr) {
        result.error = "cannot read audio sample: " + region.path;
        return result;
      }
      const int64_t base = instanceStartSample(placement.instance_index);
      const int64_t start = base + std::llround(region.start_seconds * sr);
      const int64_t skip = std::llround(region.head_trim_seconds * sr);
      int64_t span = std::llround(region.region_seconds * sr);
      span = std::min<int64_t>(
          span, static_cast<int64_t>(prepared->samples.size()) - skip);
      for (int64_t k = 0; k < span; ++k) {
        const int64_t index = start + k;
        if (index < 0 || index >= buffer_len) continue;
        track[static_cast<size_t>(index)] += static_cast<float>(
            region.gain * prepared->samples[static_cast<size_t>(skip + k)]);
      }
    }

    dsp::mixAdd(master.data(), track.data(), master.size(), 1.0f);
  }

  result.master.sample_rate = sr;
  result.master.channels = 2;
  result.master.samples.resize(static_cast<size_t>(buffer_len) * 2);
  for (int64_t i = 0; i < buffer_len; ++i) {
    result.master.samples[static_cast<size_t>(i) * 2] = master[static_cast<size_t>(i)];
    result.master.samples[static_cast<size_t>(i) * 2 + 1] =
        master[static_cast<size_t>(i)];
  }
  result.ok = true;
  return result;
}

}  // namespace tomi
