// src/corpus.cc

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

#include "ilavse/corpus.h"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "ilavse/crq.h"
#include "ilavse/image.h"
#include "ilavse/parallel.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ilavse {

namespace {
constexpr int kManifestVersion = 1;
}

void SaveManifest(const std::string& path, const Manifest& manifest) {
  json j;
  j["schema_version"] = kManifestVersion;
  j["utterances"] = json::array();
  for (const auto& u : manifest.utterances) {
    j["utterances"].push_back({{"id", u.id},
                               {"speaker", u.speaker},
                               {"clean", u.clean_path},
                               {"lips", u.lips_dir},
                               {"duration", u.duration_seconds}});
  }
  j["noises"] = json::array();
  for (const auto& n : manifest.noises) {
    j["noises"].push_back({{"id", n.id}, {"path", n.path}});
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot write manifest: " + path);
  os << j.dump(2) << "\n";
}

Manifest LoadManifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed manifest " + path + ": " + e.what());
  }
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kManifestVersion) {
    throw IoError("unsupported manifest schema in " + path);
  }

  Manifest m;
  std::vector<std::string> problems;
  for (const auto& ju : j.value("utterances", json::array())) {
    UtteranceEntry u;
    try {
      u.id = ju.at("id").get<std::string>();
      u.speaker = ju.at("speaker").get<std::string>();
      u.clean_path = ju.at("clean").get<std::string>();
      u.lips_dir = ju.at("lips").get<std::string>();
      u.duration_seconds = ju.at("duration").get<double>();
    } catch (const json::exception& e) {
      problems.push_back("malformed utterance record: " +
                         std::string(e.what()));
      continue;
    }
    if (!fs::exists(u.clean_path)) {
      problems.push_back(u.id + ": missing clean audio " + u.clean_path);
    }
    if (!fs::is_directory(u.lips_dir)) {
      problems.push_back(u.id + ": missing lip directory " + u.lips_dir);
    } else {
      std::size_t frames = 0;
      for (const auto& e : fs::directory_iterator(u.lips_dir)) {
        const auto ext = e.path().extension();
        if (ext == ".png" || ext == ".pgm") ++frames;
      }
      const double expect = u.duration_seconds * 50.0;
      if (std::fabs(static_cast<double>(frames) - expect) > 1.5) {
        problems.push_back(u.id + ": " + std::to_string(frames) +
                           " lip frames vs expected ~" +
                           std::to_string(expect) + " at 50 fps");
      }
    }
    m.utterances.push_back(std::move(u));
  }
  for (const auto& jn : j.value("noises", json::array())) {
    NoiseEntry n;
    try {
      n.id = jn.at("id").get<std::string>();
      n.path = jn.at("path").get<std::string>();
    } catch (const json::exception& e) {
      problems.push_back("malformed noise record: " + std::string(e.what()));
      continue;
    }
    if (!fs::exists(n.path)) {
      problems.push_back("noise " + n.id + ": missing file " + n.path);
    }
    m.noises.push_back(std::move(n));
  }
  if (!problems.empty()) {
    std::string msg = "manifest validation failed (" +
                      std::to_string(problems.size()) + " problems):";
    for (const auto& p : problems) msg += "\n  " + p;
    throw IoError(msg);
  }
  if (m.utterances.empty()) {
    std::fprintf(stderr, "warning: manifest %s has no utterances\n",
                 path.c_str());
  }
  return m;
}

void SplitSpec::Validate() const {
  if (train_snrs.empty() || test_snrs.empty()) {
    throw InvalidInputError("SNR lists must be non-empty");
  }
  std::set<std::string> train(train_speakers.begin(), train_speakers.end());
  for (const auto& s : test_speakers) {
    if (train.count(s)) {
      throw InvalidInputError("train/test speaker sets overlap on " + s);
    }
  }
}

namespace {

std::vector<const UtteranceEntry*> FilterSpeakers(
    const Manifest& manifest, const std::vector<std::string>& speakers) {
  std::set<std::string> keep(speakers.begin(), speakers.end());
  std::vector<const UtteranceEntry*> out;
  for (const auto& u : manifest.utterances) {
    if (keep.count(u.speaker)) out.push_back(&u);
  }
  return out;
}

}  // namespace

std::vector<MixItem> BuildTrainingSet(const Manifest& manifest,
                                      const SplitSpec& spec,
                                      std::size_t budget, std::uint64_t seed) {
  spec.Validate();
  auto utts = FilterSpeakers(manifest, spec.train_speakers);
  if (utts.empty() || manifest.noises.empty()) {
    throw InvalidInputError("training set needs utterances and noises");
  }
  std::vector<MixItem> items;
  items.reserve(utts.size() * manifest.noises.size() * spec.train_snrs.size());
  for (const auto* u : utts) {
    for (const auto& n : manifest.noises) {
      for (double snr : spec.train_snrs) {
        items.push_back({u->id, n.id, snr});
      }
    }
  }
  if (budget == 0 || budget >= items.size()) {
    if (budget > items.size()) {
      std::fprintf(stderr,
                   "warning: budget %zu exceeds cross product %zu, keeping all\n",
                   budget, items.size());
    }
    return items;
  }
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.UniformInt(i)]);
  }
  items.resize(budget);
  return items;
}

std::vector<MixItem> BuildTestSet(const Manifest& manifest,
                                  const SplitSpec& spec) {
  spec.Validate();
  auto utts = FilterSpeakers(manifest, spec.test_speakers);
  if (utts.empty() || manifest.noises.empty()) {
    throw InvalidInputError("test set needs utterances and noises");
  }
  std::vector<MixItem> items;
  for (const auto* u : utts) {
    for (const auto& n : manifest.noises) {
      for (double snr : spec.test_snrs) {
        items.push_back({u->id, n.id, snr});
      }
    }
  }
  return items;
}

void SaveMixManifest(const std::string& path,
                     const std::vector<MixItem>& items) {
  json j;
  j["schema_version"] = kManifestVersion;
  j["items"] = json::array();
  for (const auto& it : items) {
    j["items"].push_back(
        {{"utterance", it.utterance_id}, {"noise", it.noise_id}, {"snr", it.snr_db}});
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot write mix manifest: " + path);
  os << j.dump(2) << "\n";
}

std::vector<MixItem> LoadMixManifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open mix manifest: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed mix manifest " + path + ": " + e.what());
  }
  std::vector<MixItem> items;
  for (const auto& ji : j.value("items", json::array())) {
    items.push_back({ji.at("utterance").get<std::string>(),
                     ji.at("noise").get<std::string>(),
                     ji.at("snr").get<double>()});
  }
  return items;
}

// ---------------------------------------------------------------------------
// Synthetic corpus

namespace {

struct SpeakerStyle {
  double f0;
  std::vector<double> harmonic_weights;
  double vibrato_rate;
  double vibrato_depth;
  float face_shade;
  double lip_rx;  // fixed horizontal semi-axis, fraction of width
};

SpeakerStyle MakeSpeaker(Rng* rng) {
  SpeakerStyle s;
  s.f0 = rng->Uniform(95.0, 220.0);
  s.harmonic_weights.resize(12);
  for (std::size_t k = 0; k < s.harmonic_weights.size(); ++k) {
    // 1/k rolloff with a random formant-like bump.
    s.harmonic_weights[k] = 1.0 / static_cast<double>(k + 1);
  }
  const std::size_t bump = 1 + rng->UniformInt(6);
  s.harmonic_weights[bump] *= rng->Uniform(1.5, 3.0);
  s.vibrato_rate = rng->Uniform(4.0, 7.0);
  s.vibrato_depth = rng->Uniform(0.002, 0.01);
  s.face_shade = static_cast<float>(rng->Uniform(0.55, 0.8));
  s.lip_rx = rng->Uniform(0.26, 0.34);
  return s;
}

// Smooth syllabic amplitude envelope in [0, 1] with silent gaps.
std::vector<double> SyllableEnvelope(std::size_t n_samples, int sample_rate,
                                     Rng* rng) {
  std::vector<double> env(n_samples, 0.0);
  double t = rng->Uniform(0.02, 0.1);
  const double total = static_cast<double>(n_samples) / sample_rate;
  while (t < total) {
    const double dur = rng->Uniform(0.10, 0.28);
    const double amp = rng->Uniform(0.55, 1.0);
    const std::size_t s0 = static_cast<std::size_t>(t * sample_rate);
    const std::size_t s1 = std::min(
        n_samples, static_cast<std::size_t>((t + dur) * sample_rate));
    for (std::size_t i = s0; i < s1; ++i) {
      const double ph =
          static_cast<double>(i - s0) / static_cast<double>(s1 - s0);
      env[i] = amp * 0.5 * (1.0 - std::cos(2.0 * M_PI * ph));
    }
    t += dur;
    // Short inter-syllable gap, occasionally a longer pause.
    t += rng->Uniform() < 0.2 ? rng->Uniform(0.15, 0.35)
                              : rng->Uniform(0.01, 0.08);
  }
  return env;
}

Waveform RenderVoice(const SpeakerStyle& style, const std::vector<double>& env,
                     Rng* rng) {
  Waveform w;
  w.sample_rate = kSampleRate;
  w.samples.resize(env.size());
  const double phase0 = rng->Uniform(0.0, 2.0 * M_PI);
  double peak = 1e-9;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    const double f0 =
        style.f0 *
        (1.0 + style.vibrato_depth * std::sin(2.0 * M_PI * style.vibrato_rate * t));
    double v = 0.0;
    for (std::size_t k = 0; k < style.harmonic_weights.size(); ++k) {
      const double f = f0 * static_cast<double>(k + 1);
      if (f > 7600.0) break;
      v += style.harmonic_weights[k] *
           std::sin(2.0 * M_PI * f * t + phase0 * static_cast<double>(k + 1));
    }
    w.samples[i] = env[i] * v;
    peak = std::max(peak, std::fabs(w.samples[i]));
  }
  const double gain = 0.6 / peak;
  for (auto& s : w.samples) s *= gain;
  return w;
}

// Downsamples a per-sample envelope to one value per 20 ms video frame.
std::vector<double> FrameEnvelope(const std::vector<double>& env,
                                  std::size_t n_frames, int sample_rate,
                                  double fps) {
  std::vector<double> out(n_frames, 0.0);
  const double per = static_cast<double>(sample_rate) / fps;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t s0 = static_cast<std::size_t>(f * per);
    const std::size_t s1 =
        std::min(env.size(), static_cast<std::size_t>((f + 1) * per));
    double acc = 0.0;
    for (std::size_t i = s0; i < s1; ++i) acc += env[i];
    out[f] = s1 > s0 ? acc / static_cast<double>(s1 - s0) : 0.0;
  }
  return out;
}

LipFrame RenderLip(const SpeakerStyle& style, double aperture, int size) {
  LipFrame frame;
  frame.height = size;
  frame.width = size;
  frame.channels = 3;
  frame.pixels.assign(frame.NumPixels(), 0.0f);

  const double cx = 0.5 * size;
  const double cy = 0.55 * size;
  const double rx = style.lip_rx * size;
  const double ry_open = (0.04 + 0.30 * aperture) * size;
  const double lip_band = 0.10 * size;

  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = (x + 0.5) - cx;
      const double dy = (y + 0.5) - cy;
      const double mouth =
          (dx * dx) / (rx * rx) + (dy * dy) / (ry_open * ry_open);
      const double lips = (dx * dx) / ((rx + lip_band) * (rx + lip_band)) +
                          (dy * dy) / ((ry_open + lip_band) * (ry_open + lip_band));
      float r = style.face_shade + 0.08f;
      float g = style.face_shade - 0.05f;
      float b = style.face_shade - 0.10f;
      if (lips <= 1.0) {  // lip ring
        r = 0.55f;
        g = 0.25f;
        b = 0.25f;
      }
      if (mouth <= 1.0) {  // dark opening
        r = 0.08f;
        g = 0.04f;
        b = 0.05f;
      }
      frame.at(y, x, 0) = std::clamp(r, 0.0f, 1.0f);
      frame.at(y, x, 1) = std::clamp(g, 0.0f, 1.0f);
      frame.at(y, x, 2) = std::clamp(b, 0.0f, 1.0f);
    }
  }
  return frame;
}

Waveform MakeNoiseTrack(const std::string& kind, double seconds, Rng* rng) {
  Waveform w;
  w.sample_rate = kSampleRate;
  const std::size_t n = static_cast<std::size_t>(seconds * kSampleRate);
  w.samples.resize(n);
  if (kind == "white") {
    for (auto& s : w.samples) s = 0.3 * rng->Normal();
  } else if (kind == "pink") {
    double state = 0.0;
    for (auto& s : w.samples) {
      state = 0.92 * state + 0.5 * rng->Normal();
      s = 0.25 * state;
    }
  } else if (kind == "engine") {
    const double f = rng->Uniform(70.0, 95.0);
    double lp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / kSampleRate;
      lp = 0.95 * lp + 0.3 * rng->Normal();
      w.samples[i] = 0.35 * std::sin(2.0 * M_PI * f * t) +
                     0.2 * std::sin(2.0 * M_PI * 2.0 * f * t) + 0.2 * lp;
    }
  } else {  // babble: several desynchronized voices
    std::vector<double> mix(n, 0.0);
    for (int v = 0; v < 5; ++v) {
      Rng voice_rng(rng->NextU64());
      SpeakerStyle style = MakeSpeaker(&voice_rng);
      auto env = SyllableEnvelope(n, kSampleRate, &voice_rng);
      auto voice = RenderVoice(style, env, &voice_rng);
      for (std::size_t i = 0; i < n; ++i) mix[i] += voice.samples[i];
    }
    for (std::size_t i = 0; i < n; ++i) w.samples[i] = mix[i] / 5.0;
  }
  double peak = 1e-9;
  for (double s : w.samples) peak = std::max(peak, std::fabs(s));
  for (auto& s : w.samples) s *= 0.5 / peak;
  return w;
}

}  // namespace

std::pair<Waveform, std::vector<double>> SynthesizeSpeech(
    const SpeechParams& params, Rng* rng) {
  SpeakerStyle style = MakeSpeaker(rng);
  style.f0 = params.f0;
  if (!params.harmonic_weights.empty()) {
    style.harmonic_weights = params.harmonic_weights;
  }
  const std::size_t n =
      static_cast<std::size_t>(params.duration * kSampleRate);
  auto env = SyllableEnvelope(n, kSampleRate, rng);
  auto wave = RenderVoice(style, env, rng);
  auto frames = FrameEnvelope(
      env, static_cast<std::size_t>(params.duration * 50.0), kSampleRate, 50.0);
  return {std::move(wave), std::move(frames)};
}

SplitSpec SyntheticSplit(const SynthSpec& spec) {
  SplitSpec split;
  for (int s = 0; s < spec.train_speakers; ++s) {
    split.train_speakers.push_back("trn" + std::to_string(s));
  }
  for (int s = 0; s < spec.test_speakers; ++s) {
    split.test_speakers.push_back("tst" + std::to_string(s));
  }
  return split;
}

Manifest GenerateSyntheticCorpus(const std::string& root, const SynthSpec& spec,
                                 std::uint64_t seed, int jobs) {
  fs::create_directories(fs::path(root) / "clean");
  fs::create_directories(fs::path(root) / "noise");
  fs::create_directories(fs::path(root) / "lips");

  struct Job {
    std::string speaker;
    std::string id;
    std::uint64_t seed;
  };
  std::vector<Job> jobs_list;
  std::vector<std::string> speakers;
  for (int s = 0; s < spec.train_speakers; ++s) {
    speakers.push_back("trn" + std::to_string(s));
  }
  for (int s = 0; s < spec.test_speakers; ++s) {
    speakers.push_back("tst" + std::to_string(s));
  }
  std::uint64_t stream = 0;
  for (const auto& speaker : speakers) {
    for (int u = 0; u < spec.utterances_per_speaker; ++u) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%s_u%03d", speaker.c_str(), u);
      jobs_list.push_back({speaker, buf, Rng::DeriveSeed(seed, stream++)});
    }
  }

  std::vector<UtteranceEntry> entries(jobs_list.size());
  ParallelFor(jobs_list.size(), jobs, [&](std::size_t idx) {
    const Job& job = jobs_list[idx];
    Rng rng(job.seed);
    // Speaker style is derived from the speaker name hash so all of a
    // speaker's utterances share a voice.
    std::uint64_t speaker_hash = 1469598103934665603ULL;
    for (char c : job.speaker) {
      speaker_hash = (speaker_hash ^ static_cast<unsigned char>(c)) *
                     1099511628211ULL;
    }
    Rng speaker_rng(Rng::DeriveSeed(seed, speaker_hash));
    SpeakerStyle style = MakeSpeaker(&speaker_rng);

    // Whole-frame durations keep audio/video alignment exact at 50 fps.
    const int n_frames = static_cast<int>(
        rng.Uniform(spec.min_duration, spec.max_duration) * spec.fps);
    const std::size_t n_samples = static_cast<std::size_t>(n_frames) *
                                  static_cast<std::size_t>(kSampleRate / spec.fps);

    auto env = SyllableEnvelope(n_samples, kSampleRate, &rng);
    auto wave = RenderVoice(style, env, &rng);
    auto fenv = FrameEnvelope(env, static_cast<std::size_t>(n_frames),
                              kSampleRate, spec.fps);

    const auto wav_path = (fs::path(root) / "clean" / (job.id + ".wav")).string();
    WriteWav(wav_path, wave);

    const auto lips = fs::path(root) / "lips" / job.id;
    fs::create_directories(lips);
    for (int f = 0; f < n_frames; ++f) {
      auto frame = RenderLip(style, std::clamp(fenv[static_cast<std::size_t>(f)],
                                               0.0, 1.0),
                             spec.lip_size);
      char name[32];
      if (spec.pgm_frames) {
        std::snprintf(name, sizeof(name), "%06d.pgm", f);
        WritePgm((lips / name).string(), ColorReduce(frame, ColorMode::kGray));
      } else {
        std::snprintf(name, sizeof(name), "%06d.png", f);
        WritePng((lips / name).string(), frame);
      }
    }

    entries[idx] = {job.id, job.speaker, wav_path, lips.string(),
                    static_cast<double>(n_frames) / spec.fps};
  });

  Manifest manifest;
  manifest.utterances = std::move(entries);

  Rng noise_rng(Rng::DeriveSeed(seed, 0xabcdef));
  for (const std::string kind : {"pink", "white", "engine", "babble"}) {
    const auto path = (fs::path(root) / "noise" / (kind + ".wav")).string();
    WriteWav(path, MakeNoiseTrack(kind, 8.0, &noise_rng));
    manifest.noises.push_back({kind, path});
  }

  SaveManifest((fs::path(root) / "manifest.json").string(), manifest);
  return manifest;
}

}  // namespace ilavse
