// Inter-phrase latent similarity: per-bar latents from rendered audio
// (mel-spectrogram and raw-waveform variants), cosine self-similarity, and
// Cohen's-d scoring over same/different phrase-label groups with the
// diagonal excluded.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tomi/audio/wav_io.h"
#include "tomi/core/types.h"
#include "tomi/ils/mel.h"

namespace tomi {

enum class LatentKind { MelSpectrogram, Waveform };

/// Pooling granularity for latent elements; Bar is the default, Beat is a
/// 4x finer sensitivity switch.
enum class LatentGranularity { Bar, Beat };

struct LatentSequence {
  std::vector<std::vector<double>> elements;  // one equal-length vector per bar
  std::vector<PhraseLabel> labels;            // one per bar
};

struct SimilarityMatrix {
  std::vector<std::vector<double>> values;  // symmetric, entries in [-1, 1]
  std::vector<bool> zero_vector;            // flagged inputs (similarity 0)

  size_t size() const { return values.size(); }
};

struct IlsReport {
  double mean_same = 0.0;
  double mean_diff = 0.0;
  double var_same = 0.0;   // sample variance (n - 1)
  double var_diff = 0.0;
  int64_t n_same = 0;      // ordered off-diagonal pair counts
  int64_t n_diff = 0;
  double pooled_s = 0.0;
  double ils = 0.0;
  bool degenerate = false;  // pooled deviation was zero
};

/// Per-bar (or per-beat) latents over the timeline: mel frames mean-pooled
/// within each element, or each element's raw samples. Labels come from
/// the element's section instance. Throws when the audio does not span the
/// timeline.
LatentSequence barLatents(const std::vector<float>& mono, int sample_rate,
                          const Timeline& timeline, double tempo_bpm,
                          LatentKind kind, const MelParams& params = {},
                          LatentGranularity granularity = LatentGranularity::Bar);

/// Cosine self-similarity; zero vectors take similarity 0 by convention
/// and are flagged.
SimilarityMatrix selfSimilarity(const LatentSequence& latents);

/// Cohen's d between same-label and different-label ordered off-diagonal
/// similarities. Throws std::invalid_argument when fewer than two of
/// either pair group exist (for example a single distinct label).
IlsReport ilsScore(const SimilarityMatrix& matrix,
                   const std::vector<PhraseLabel>& labels);

/// Binary portable graymap (darker = more similar) plus a sidecar text
/// file (path + ".labels.txt") listing label block boundaries.
bool exportMatrixImage(const SimilarityMatrix& matrix,
                       const std::vector<PhraseLabel>& labels,
                       const std::string& path);

struct SongIlsResult {
  bool ok = false;
  std::string error;
  IlsReport mel;
  IlsReport waveform;
  SimilarityMatrix mel_matrix;
  SimilarityMatrix waveform_matrix;
  std::vector<PhraseLabel> labels;
};

/// Full evaluation of a rendered song: both latent kinds scored over the
/// timeline's bar labels.
SongIlsResult evaluateSongIls(const AudioBuffer& audio, const Timeline& timeline,
                              double tempo_bpm, const MelParams& params = {});

/// Deterministic structured-text report with every field of both scores.
std::string formatIlsReport(const SongIlsResult& result, const MelParams& params);

}  // namespace tomi
