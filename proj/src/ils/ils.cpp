#include "tomi/ils/ils.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tomi/dsp/kernels.h"
#include "tomi/util/file_io.h"

namespace tomi {

namespace {

std::vector<PhraseLabel> elementLabels(const Timeline& timeline,
                                       int per_bar) {
  std::vector<PhraseLabel> labels;
  labels.reserve(static_cast<size_t>(timeline.total_bars) *
                 static_cast<size_t>(per_bar));
  for (const SectionInstance& instance : timeline.instances) {
    for (int i = 0; i < instance.length_bars * per_bar; ++i) {
      labels.push_back(instance.label);
    }
  }
  return labels;
}

}  // namespace

LatentSequence barLatents(const std::vector<float>& mono, int sample_rate,
                          const Timeline& timeline, double tempo_bpm,
                          LatentKind kind, const MelParams& params,
                          LatentGranularity granularity) {
  const int per_bar = granularity == LatentGranularity::Beat ? kBeatsPerBar : 1;
  const double element_samples =
      barSeconds(tempo_bpm) * sample_rate / per_bar;
  const int total_elements = timeline.total_bars * per_bar;
  if (total_elements <= 0) {
    throw std::invalid_argument("timeline has no bars");
  }
  const auto element_start = [&](int element) -> size_t {
    return static_cast<size_t>(std::llround(element * element_samples));
  };
  if (mono.size() < element_start(total_elements - 1) + 1) {
    throw std::invalid_argument("audio shorter than the timeline");
  }

  LatentSequence sequence;
  sequence.labels = elementLabels(timeline, per_bar);

  if (kind == LatentKind::Waveform) {
    const size_t element_len = static_cast<size_t>(element_samples);
    for (int element = 0; element < total_elements; ++element) {
      const size_t start = element_start(element);
      std::vector<double> values(element_len, 0.0);
      for (size_t i = 0; i < element_len && start + i < mono.size(); ++i) {
        values[i] = static_cast<double>(mono[start + i]);
      }
      sequence.elements.push_back(std::move(values));
    }
    return sequence;
  }

  const auto frames = melSpectrogram(mono, sample_rate, params);
  const size_t n_mels = frames.empty() ? 0 : frames.front().size();
  std::vector<std::vector<double>> pooled(static_cast<size_t>(total_elements),
                                          std::vector<double>(n_mels, 0.0));
  std::vector<int> counts(static_cast<size_t>(total_elements), 0);
  for (size_t f = 0; f < frames.size(); ++f) {
    // Frames belong to the element containing their center.
    const double center =
        static_cast<double>(f) * params.hop + params.n_fft / 2.0;
    const int element = static_cast<int>(center / element_samples);
    if (element < 0 || element >= total_elements) continue;
    for (size_t m = 0; m < n_mels; ++m) {
      pooled[static_cast<size_t>(element)][m] += frames[f][m];
    }
    counts[static_cast<size_t>(element)]++;
  }
  for (int element = 0; element < total_elements; ++element) {
    if (counts[static_cast<size_t>(element)] > 0) {
      for (double& value : pooled[static_cast<size_t>(element)]) {
        value /= counts[static_cast<size_t>(element)];
      }
    }
    sequence.elements.push_back(std::move(pooled[static_cast<size_t>(element)]));
  }
  return sequence;
}

SimilarityMatrix selfSimilarity(const LatentSequence& latents) {
  const size_t n = latents.elements.size();
  SimilarityMatrix matrix;
  matrix.values.assign(n, std::vector<double>(n, 0.0));
  matrix.zero_vector.assign(n, false);

  std::vector<double> norms(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const std::vector<double>& e = latents.elements[i];
    norms[i] = std::sqrt(dsp::sumSquares(e.data(), e.size()));
    if (norms[i] <= 0.0) matrix.zero_vector[i] = true;
  }

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      double similarity = 0.0;
      if (norms[i] > 0.0 && norms[j] > 0.0) {
        const std::vector<double>& a = latents.elements[i];
        const std::vector<double>& b = latents.elements[j];
        similarity = dsp::dot(a.data(), b.data(), a.size()) / (norms[i] * norms[j]);
        similarity = std::clamp(similarity, -1.0, 1.0);
      }
      matrix.values[i][j] = similarity;
      matrix.values[j][i] = similarity;
    }
  }
  return matrix;
}

IlsReport ilsScore(const SimilarityMatrix& matrix,
                   const std::vector<PhraseLabel>& labels) {
  const size_t n = matrix.size();
  if (labels.size() != n) {
    throw std::invalid_argument("label count must match matrix size");
  }

  // Welford-free two-pass over ordered off-diagonal pairs.
  double sum_same = 0.0;
  double sum_diff = 0.0;
  int64_t n_same = 0;
  int64_t n_diff = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (labels[i] == labels[j]) {
        sum_same += matrix.values[i][j];
        ++n_same;
      } else {
        sum_diff += matrix.values[i][j];
        ++n_diff;
      }
    }
  }
  if (n_same < 2 || n_diff < 2) {
    throw std::invalid_argument(
        "ILS needs at least two same-label and two different-label pairs");
  }

  IlsReport report;
  report.n_same = n_same;
  report.n_diff = n_diff;
  report.mean_same = sum_same / static_cast<double>(n_same);
  report.mean_diff = sum_diff / static_cast<double>(n_diff);

  double ss_same = 0.0;
  double ss_diff = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double value = matrix.values[i][j];
      if (labels[i] == labels[j]) {
        ss_same += (value - report.mean_same) * (value - report.mean_same);
      } else {
        ss_diff += (value - report.mean_diff) * (value - report.mean_diff);
      }
    }
  }
  report.var_same = ss_same / static_cast<double>(n_same - 1);
  report.var_diff = ss_diff / static_cast<double>(n_diff - 1);
  report.pooled_s = std::sqrt(
      (static_cast<double>(n_same - 1) * report.var_same +
       static_cast<double>(n_diff - 1) * report.var_diff) /
      static_cast<double>(n_same + n_diff - 2));

  if (report.pooled_s > 0.0) {
    report.ils = (report.mean_same - report.mean_diff) / report.pooled_s;
  } else {
    report.degenerate = true;
    const double delta = report.mean_same - report.mean_diff;
    if (delta == 0.0) {
      report.ils = 0.0;
    } else {
      report.ils = delta > 0.0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
    }
  }
  return report;
}

bool exportMatrixImage(const SimilarityMatrix& matrix,
                       const std::vector<PhraseLabel>& labels,
                       const std::string& path) {
  const size_t n = matrix.size();
  std::vector<uint8_t> image;
  image.reserve(n * n + 32);
  const std::string header =
      "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  image.insert(image.end(), header.begin(), header.end());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      // Darker pixels mean higher similarity.
      const double similarity = std::clamp(matrix.values[i][j], -1.0, 1.0);
      const double brightness = 1.0 - (similarity + 1.0) / 2.0;
      image.push_back(static_cast<uint8_t>(std::lround(brightness * 255.0)));
    }
  }
  if (!writeBinaryFile(path, image)) return false;

  // Sidecar: contiguous same-label bar blocks.
  std::ostringstream sidecar;
  sidecar << "label blocks (start_bar end_bar label)\n";
  size_t block_start = 0;
  for (size_t i = 1; i <= labels.size(); ++i) {
    if (i == labels.size() || labels[i] != labels[block_start]) {
      sidecar << block_start << " " << i - 1 << " "
              << toString(labels[block_start]) << "\n";
      block_start = i;
    }
  }
  return writeTextFile(path + ".labels.txt", sidecar.str());
}

SongIlsResult evaluateSongIls(const AudioBuffer& audio, const Timeline& timeline,
                              double tempo_bpm, const MelParams& params) {
  SongIlsResult result;
  try {
    const std::vector<float> mono = monoMixdown(audio);
    const LatentSequence mel = barLatents(mono, audio.sample_rate, timeline,
                                          tempo_bpm, LatentKind::MelSpectrogram,
                                          params);
    const LatentSequence wf = barLatents(mono, audio.sample_rate, timeline,
                                         tempo_bpm, LatentKind::Waveform, params);
    result.labels = mel.labels;
    result.mel_matrix = selfSimilarity(mel);
    result.waveform_matrix = selfSimilarity(wf);
    result.mel = ilsScore(result.mel_matrix, mel.labels);
    result.waveform = ilsScore(result.waveform_matrix, wf.labels);
    result.ok = true;
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

namespace {

std::string fixed9(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9f", value);
  return buffer;
}

void appendReport(std::ostringstream& out, const char* name,
                  const IlsReport& report) {
  out << name << ".mean_same " << fixed9(report.mean_same) << "\n";
  out << name << ".mean_diff " << fixed9(report.mean_diff) << "\n";
  out << name << ".var_same " << fixed9(report.var_same) << "\n";
  out << name << ".var_diff " << fixed9(report.var_diff) << "\n";
  out << name << ".n_same " << report.n_same << "\n";
  out << name << ".n_diff " << report.n_diff << "\n";
  out << name << ".pooled_s " << fixed9(report.pooled_s) << "\n";
  out << name << ".ils " << fixed9(report.ils) << "\n";
  out << name << ".degenerate " << (report.degenerate ? 1 : 0) << "\n";
}

}  // namespace

std::string formatIlsReport(const SongIlsResult& result, const MelParams& params) {
  std::ostringstream out;
  out << "ils_report v1\n";
  out << "bars " << result.labels.size() << "\n";
  out << "mel.n_fft " << params.n_fft << "\n";
  out << "mel.hop " << params.hop << "\n";
  out << "mel.n_mels " << params.n_mels << "\n";
  out << "mel.window hann\n";
  // The MERT-embedding variant needs an external model; the field stays
  // reserved so report consumers see a stable schema.
  out << "ils_mert n/a\n";
  appendReport(out, "ils_ms", result.mel);
  appendReport(out, "ils_wf", result.waveform);
  return out.str();
}

}  // namespace tomi
