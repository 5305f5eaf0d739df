#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vog/types.hpp"

namespace vog {

/// Controls for the synthetic video generator. Each video is a sequence of
/// segments; a segment opens with one heading box followed by body boxes.
/// Heading boxes are visually highlighted (larger per-character area and a
/// distinct top margin) when highlight > 1, and lexically distinguishable
/// (disjoint character range) when text_signal is on.
struct SynthVideoConfig {
  int n_videos = 100;
  int segments_min = 3;
  int segments_max = 5;
  int body_boxes_min = 2;
  int body_boxes_max = 3;
  int heading_len_min = 3;
  int heading_len_max = 8;
  int body_len_min = 4;
  int body_len_max = 10;
  int vocab_size = 60;        // body character inventory
  int heading_vocab_size = 40;
  double highlight = 2.0;     // font-size multiplier for heading boxes, >= 1
  bool text_signal = true;
  double filler_rate = 0.0;   // fraction of headings with planted filler characters
  std::string id_prefix = "synth";

  void validate() const;
};

struct SyntheticVideo {
  VideoDocument document;  // already deduplicated
  std::vector<OutlineAnnotation> annotations;
};

/// Pure function of (config, seed): equal inputs give byte-identical corpora.
std::vector<SyntheticVideo> generate_synthetic_corpus(const SynthVideoConfig& config,
                                                      std::uint64_t seed);

/// Controls for the synthetic article generator used by heading-detection
/// pretraining. Headings always carry the lexical signal; the character
/// inventory matches the video generator so learned statistics transfer.
struct SynthArticleConfig {
  int n_articles = 200;
  int headings_min = 3;
  int headings_max = 6;
  int body_blocks_min = 1;
  int body_blocks_max = 3;
  int heading_len_min = 3;
  int heading_len_max = 8;
  int body_len_min = 8;
  int body_len_max = 24;
  int vocab_size = 60;
  int heading_vocab_size = 40;
  std::string id_prefix = "article";

  void validate() const;
};

std::vector<ArticleRecord> generate_synthetic_articles(const SynthArticleConfig& config,
                                                       std::uint64_t seed);

// Character inventory shared by both generators.
char32_t synth_body_char(int index);
char32_t synth_heading_char(int index);
char32_t synth_filler_char(int index);

}  // namespace vog
