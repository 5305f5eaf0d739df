#include "vog/synthetic.hpp"

#include <cmath>

#include "vog/common.hpp"
#include "vog/rng.hpp"
#include "vog/utf8.hpp"

namespace vog {

namespace {

constexpr double kFrameH = 720;
constexpr double kFrameW = 1280;
constexpr double kCharH = 32;   // body character cell, pixels
constexpr double kCharW = 20;
constexpr double kBodyTop = 640;
constexpr double kHeadingTop = 160;
constexpr double kFrameStep = 0.5;  // two frames per second

std::string random_text(Rng& rng, int len, bool heading_chars, const SynthVideoConfig& cfg) {
  std::string out;
  for (int i = 0; i < len; ++i) {
    char32_t cp = heading_chars ? synth_heading_char(static_cast<int>(rng.next_below(
                                      static_cast<std::uint64_t>(cfg.heading_vocab_size))))
                                : synth_body_char(static_cast<int>(
                                      rng.next_below(static_cast<std::uint64_t>(cfg.vocab_size))));
    utf8_append(out, cp);
  }
  return out;
}

SubtitleBox make_box(const std::string& text, double timestamp, double scale, bool highlighted) {
  SubtitleBox box;
  box.text = text;
  box.timestamp = timestamp;
  const double chars = static_cast<double>(utf8_length(text));
  box.height = std::round(kCharH * scale);
  box.width = std::round(kCharW * scale * chars);
  box.top_margin = highlighted ? kHeadingTop : kBodyTop;
  box.left_margin = std::floor((kFrameW - box.width) / 2.0);
  return box;
}

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

char32_t synth_body_char(int index) { return static_cast<char32_t>(0x4E00 + index); }
char32_t synth_heading_char(int index) { return static_cast<char32_t>(0x5200 + index); }
char32_t synth_filler_char(int index) { return static_cast<char32_t>(0x5500 + index); }

void SynthVideoConfig::validate() const {
  if (n_videos <= 0) throw config_error("n_videos must be positive");
  if (segments_min < 1 || segments_max < segments_min) throw config_error("bad segments range");
  if (body_boxes_min < 1 || body_boxes_max < body_boxes_min) throw config_error("bad body boxes range");
  if (heading_len_min < 1 || heading_len_max < heading_len_min) throw config_error("bad heading length range");
  if (body_len_min < 1 || body_len_max < body_len_min) throw config_error("bad body length range");
  if (vocab_size < 2 || vocab_size > 512) throw config_error("vocab_size out of range");
  if (heading_vocab_size < 2 || heading_vocab_size > 512) throw config_error("heading_vocab_size out of range");
  if (highlight < 1.0 || highlight > 4.0) throw config_error("highlight must be in [1, 4]");
  if (filler_rate < 0.0 || filler_rate > 1.0) throw config_error("filler_rate must be in [0, 1]");
  // Widest possible box must still fit the frame.
  const double widest = kCharW * highlight * static_cast<double>(std::max(heading_len_max + 2, body_len_max));
  if (widest > kFrameW) throw config_error("text lengths exceed frame width");
}

std::vector<SyntheticVideo> generate_synthetic_corpus(const SynthVideoConfig& config,
                                                      std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::vector<SyntheticVideo> corpus;
  corpus.reserve(static_cast<std::size_t>(config.n_videos));

  for (int v = 0; v < config.n_videos; ++v) {
    SyntheticVideo video;
    video.document.video_id = config.id_prefix + "-" + zero_pad(v, 4);
    video.document.frame_height = kFrameH;
    video.document.frame_width = kFrameW;

    const int segments = rng.next_int(config.segments_min, config.segments_max);
    int next_token = 0;  // running index into the comma-joined token sequence
    double t = kFrameStep;
    std::string prev_text;

    for (int s = 0; s < segments; ++s) {
      // Heading box, possibly with planted filler characters to rewrite away.
      const int heading_len = rng.next_int(config.heading_len_min, config.heading_len_max);
      std::string heading = random_text(rng, heading_len, config.text_signal, config);
      std::string rewritten = heading;
      if (config.filler_rate > 0 && rng.next_double() < config.filler_rate) {
        std::vector<char32_t> chars = utf8_decode(heading);
        const int fillers = rng.next_int(1, 2);
        for (int f = 0; f < fillers; ++f) {
          const int pos = rng.next_int(0, static_cast<int>(chars.size()));
          chars.insert(chars.begin() + pos, synth_filler_char(rng.next_int(0, 3)));
        }
        heading = utf8_encode(chars);
      }
      if (heading == prev_text) {
        // A repeat of the previous box would be collapsed by deduplication
        // and shift every later span index; nudge one character.
        std::vector<char32_t> chars = utf8_decode(heading);
        chars.push_back(config.text_signal ? synth_heading_char(0) : synth_body_char(0));
        heading = utf8_encode(chars);
        rewritten = config.filler_rate > 0 ? rewritten : heading;
      }

      video.document.boxes.push_back(make_box(heading, t, config.highlight, config.highlight > 1.0));
      const int heading_tokens = static_cast<int>(utf8_length(heading));
      OutlineAnnotation ann;
      ann.segmentation_time = t;
      ann.span_start = next_token;
      ann.span_end = next_token + heading_tokens - 1;
      ann.rewritten = rewritten;
      video.annotations.push_back(std::move(ann));
      next_token += heading_tokens + 1;  // +1 for the separator after this box
      t += kFrameStep;
      prev_text = heading;

      const int body_boxes = rng.next_int(config.body_boxes_min, config.body_boxes_max);
      for (int b = 0; b < body_boxes; ++b) {
        std::string text = random_text(rng, rng.next_int(config.body_len_min, config.body_len_max),
                                       false, config);
        while (text == prev_text)
          text = random_text(rng, rng.next_int(config.body_len_min, config.body_len_max), false, config);
        video.document.boxes.push_back(make_box(text, t, 1.0, false));
        next_token += static_cast<int>(utf8_length(text)) + 1;
        t += kFrameStep;
        prev_text = text;
      }
    }
    video.document.validate();
    corpus.push_back(std::move(video));
  }
  return corpus;
}

void SynthArticleConfig::validate() const {
  if (n_articles <= 0) throw config_error("n_articles must be positive");
  if (headings_min < 1 || headings_max < headings_min) throw config_error("bad headings range");
  if (body_blocks_min < 1 || body_blocks_max < body_blocks_min) throw config_error("bad body blocks range");
  if (heading_len_min < 1 || heading_len_max < heading_len_min) throw config_error("bad heading length range");
  if (body_len_min < 1 || body_len_max < body_len_min) throw config_error("bad body length range");
  if (vocab_size < 2 || vocab_size > 512) throw config_error("vocab_size out of range");
  if (heading_vocab_size < 2 || heading_vocab_size > 512) throw config_error("heading_vocab_size out of range");
}

std::vector<ArticleRecord> generate_synthetic_articles(const SynthArticleConfig& config,
                                                       std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::vector<ArticleRecord> articles;
  articles.reserve(static_cast<std::size_t>(config.n_articles));

  auto text = [&](int len, bool heading) {
    std::string out;
    for (int i = 0; i < len; ++i) {
      char32_t cp = heading ? synth_heading_char(static_cast<int>(rng.next_below(
                                  static_cast<std::uint64_t>(config.heading_vocab_size))))
                            : synth_body_char(static_cast<int>(
                                  rng.next_below(static_cast<std::uint64_t>(config.vocab_size))));
      utf8_append(out, cp);
    }
    return out;
  };

  for (int a = 0; a < config.n_articles; ++a) {
    ArticleRecord rec;
    rec.article_id = config.id_prefix + "-" + zero_pad(a, 4);
    const int headings = rng.next_int(config.headings_min, config.headings_max);
    for (int h = 0; h < headings; ++h) {
      rec.blocks.push_back({text(rng.next_int(config.heading_len_min, config.heading_len_max), true), true});
      const int bodies = rng.next_int(config.body_blocks_min, config.body_blocks_max);
      for (int b = 0; b < bodies; ++b)
        rec.blocks.push_back({text(rng.next_int(config.body_len_min, config.body_len_max), false), false});
    }
    articles.push_back(std::move(rec));
  }
  return articles;
}

}  // namespace vog
