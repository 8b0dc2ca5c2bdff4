// ilavse/corpus.h

// Copyright 2026  The iLAVSE C++ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.
//
// Dataset manifests, train/test assembly, and a synthetic desk-scale corpus
// generator: harmonic speech-like audio whose amplitude envelope drives a
// rendered ellipse "lip" aperture, plus stationary and babble-like noises.

#ifndef ILAVSE_CORPUS_H_
#define ILAVSE_CORPUS_H_

#include <optional>
#include <string>
#include <vector>

#include "ilavse/rng.h"
#include "ilavse/wav.h"

namespace ilavse {

struct UtteranceEntry {
  std::string id;
  std::string speaker;
  std::string clean_path;  // 16-bit PCM wav
  std::string lips_dir;    // zero-padded frame indices, .png/.pgm
  double duration_seconds = 0.0;
};

struct NoiseEntry {
  std::string id;
  std::string path;
};

struct Manifest {
  std::vector<UtteranceEntry> utterances;
  std::vector<NoiseEntry> noises;
};

// Parses and validates a manifest. Validation failures are collected and
// reported together, naming every invalid entry.
Manifest LoadManifest(const std::string& path);
void SaveManifest(const std::string& path, const Manifest& manifest);

struct SplitSpec {
  std::vector<std::string> train_speakers;
  std::vector<std::string> test_speakers;
  std::vector<double> train_snrs = {-12, -6, 0, 6, 12};
  std::vector<double> test_snrs = {-1, -4, -7, -10};

  void Validate() const;
};

// One noisy utterance to synthesize: clean utterance x noise x SNR.
struct MixItem {
  std::string utterance_id;
  std::string noise_id;
  double snr_db = 0.0;
};

// Cross product over train speakers' utterances, uniformly subsampled to
// `budget` with the seeded rng. A budget of 0 or >= the cross product keeps
// everything.
std::vector<MixItem> BuildTrainingSet(const Manifest& manifest,
                                      const SplitSpec& spec,
                                      std::size_t budget, std::uint64_t seed);

// Exhaustive cross product over test speakers' utterances.
std::vector<MixItem> BuildTestSet(const Manifest& manifest,
                                  const SplitSpec& spec);

void SaveMixManifest(const std::string& path, const std::vector<MixItem>& items);
std::vector<MixItem> LoadMixManifest(const std::string& path);

struct SynthSpec {
  int train_speakers = 5;
  int test_speakers = 2;
  int utterances_per_speaker = 12;
  double min_duration = 1.5;  // seconds
  double max_duration = 2.5;
  int lip_size = 64;  // rendered square resolution
  double fps = 50.0;
  bool pgm_frames = false;  // .pgm instead of .png
};

// Generates corpus_root/{clean,noise,lips/<id>/%06d.png} plus manifest.json
// and returns the manifest. Bit-identical for a fixed seed.
Manifest GenerateSyntheticCorpus(const std::string& root, const SynthSpec& spec,
                                 std::uint64_t seed, int jobs = 1);

// Speaker lists implied by the SynthSpec naming scheme (trn0..., tst0...).
SplitSpec SyntheticSplit(const SynthSpec& spec);

// Internal synthesis helpers, exposed for tests.
struct SpeechParams {
  double f0 = 140.0;
  double duration = 2.0;
  std::vector<double> harmonic_weights;
};

// Returns the waveform and its 50 fps amplitude-envelope track.
std::pair<Waveform, std::vector<double>> SynthesizeSpeech(
    const SpeechParams& params, Rng* rng);

}  // namespace ilavse

#endif  // ILAVSE_CORPUS_H_
