#include "vog/corpus.hpp"

#include <algorithm>
#include <set>

#include "vog/common.hpp"
#include "vog/utf8.hpp"

namespace vog {

VideoDocument dedup_subtitles(const VideoDocument& doc) {
  VideoDocument out = doc;
  out.boxes.clear();
  for (const SubtitleBox& b : doc.boxes) {
    if (!out.boxes.empty() && out.boxes.back().text == b.text) continue;
    out.boxes.push_back(b);
  }
  return out;
}

TokenSequence build_token_sequence(const VideoDocument& doc, std::size_t max_len) {
  TokenSequence seq;
  for (std::size_t i = 0; i < doc.boxes.size(); ++i) {
    if (i > 0) {
      seq.tokens.push_back(kSeparator);
      seq.timestamp_of.push_back(doc.boxes[i - 1].timestamp);
      seq.box_index_of.push_back(-1);
    }
    const std::vector<char32_t> chars = utf8_decode(doc.boxes[i].text);
    for (char32_t cp : chars) {
      seq.tokens.push_back(cp);
      seq.timestamp_of.push_back(doc.boxes[i].timestamp);
      seq.box_index_of.push_back(static_cast<int>(i));
    }
  }
  if (seq.tokens.size() > max_len) {
    seq.tokens.resize(max_len);
    seq.timestamp_of.resize(max_len);
    seq.box_index_of.resize(max_len);
    seq.truncated = true;
  }
  seq.visual.assign(seq.tokens.size(), VisualTriple{});
  return seq;
}

void compute_visual_features(const VideoDocument& doc, TokenSequence& seq) {
  // One triple per box; all of its tokens share it.
  std::vector<VisualTriple> per_box(doc.boxes.size());
  for (std::size_t i = 0; i < doc.boxes.size(); ++i) {
    const SubtitleBox& b = doc.boxes[i];
    const double chars = static_cast<double>(utf8_length(b.text));
    per_box[i].rel_top = b.top_margin / doc.frame_height;
    per_box[i].rel_left = b.left_margin / doc.frame_width;
    per_box[i].char_area = (b.height * b.width) / (doc.frame_height * doc.frame_width * chars);
  }
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const int bi = seq.box_index_of[k];
    seq.visual[k] = bi < 0 ? VisualTriple{} : per_box[static_cast<std::size_t>(bi)];
  }
}

TagSequence spans_to_tags(std::size_t sequence_length, const std::vector<Span>& spans) {
  TagSequence ts;
  ts.scheme = TagScheme::kBio;
  ts.tags.assign(sequence_length, kTagO);
  std::vector<Span> sorted = spans;
  std::sort(sorted.begin(), sorted.end(), [](const Span& a, const Span& b) { return a.start < b.start; });
  int prev_end = -1;
  for (const Span& s : sorted) {
    if (s.start > s.end) throw parse_error("span start after end");
    if (s.start < 0 || static_cast<std::size_t>(s.end) >= sequence_length)
      throw parse_error("span out of bounds");
    if (s.start <= prev_end) throw parse_error("overlapping spans");
    prev_end = s.end;
    ts.tags[static_cast<std::size_t>(s.start)] = kTagB;
    for (int k = s.start + 1; k <= s.end; ++k) ts.tags[static_cast<std::size_t>(k)] = kTagI;
  }
  return ts;
}

TagSequence spans_to_tags(const TokenSequence& seq, const std::vector<OutlineAnnotation>& annotations) {
  std::vector<Span> spans;
  spans.reserve(annotations.size());
  for (const OutlineAnnotation& a : annotations) spans.push_back({a.span_start, a.span_end});
  return spans_to_tags(seq.size(), spans);
}

std::optional<std::pair<TokenSequence, TagSequence>> build_heading_pretrain_example(
    const ArticleRecord& article, std::size_t max_len) {
  if (article.heading_count() < 3) return std::nullopt;
  TokenSequence seq;
  TagSequence tags;
  tags.scheme = TagScheme::kBio;
  for (std::size_t i = 0; i < article.blocks.size(); ++i) {
    if (i > 0) {
      seq.tokens.push_back(kSeparator);
      seq.timestamp_of.push_back(0.0);
      seq.box_index_of.push_back(-1);
      tags.tags.push_back(kTagO);
    }
    const std::vector<char32_t> chars = utf8_decode(article.blocks[i].text);
    for (std::size_t k = 0; k < chars.size(); ++k) {
      seq.tokens.push_back(chars[k]);
      seq.timestamp_of.push_back(0.0);
      seq.box_index_of.push_back(static_cast<int>(i));
      if (article.blocks[i].is_heading)
        tags.tags.push_back(k == 0 ? kTagB : kTagI);
      else
        tags.tags.push_back(kTagO);
    }
  }
  if (seq.tokens.size() > max_len) {
    seq.tokens.resize(max_len);
    seq.timestamp_of.resize(max_len);
    seq.box_index_of.resize(max_len);
    tags.tags.resize(max_len);
    seq.truncated = true;
  }
  seq.visual.assign(seq.tokens.size(), VisualTriple{});
  return std::make_pair(std::move(seq), std::move(tags));
}

std::vector<char32_t> collect_characters(const std::vector<VideoDocument>& docs) {
  std::set<char32_t> chars;
  chars.insert(kSeparator);
  for (const VideoDocument& d : docs)
    for (const SubtitleBox& b : d.boxes)
      for (char32_t cp : utf8_decode(b.text)) chars.insert(cp);
  return {chars.begin(), chars.end()};
}

std::vector<char32_t> collect_characters(const std::vector<ArticleRecord>& articles) {
  std::set<char32_t> chars;
  chars.insert(kSeparator);
  for (const ArticleRecord& a : articles)
    for (const auto& blk : a.blocks)
      for (char32_t cp : utf8_decode(blk.text)) chars.insert(cp);
  return {chars.begin(), chars.end()};
}

std::vector<int> sentence_slots(const TokenSequence& seq) {
  std::vector<int> slots;
  if (seq.size() == 0) return slots;
  slots.push_back(0);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    if (seq.box_index_of[k] < 0 && k + 1 < seq.size()) slots.push_back(static_cast<int>(k));
  }
  return slots;
}

int owning_subtitle(const TokenSequence& seq, int pos) {
  const int n = static_cast<int>(seq.size());
  if (pos < 0 || pos >= n) throw parse_error("token position out of bounds");
  if (seq.box_index_of[static_cast<std::size_t>(pos)] >= 0)
    return seq.box_index_of[static_cast<std::size_t>(pos)];
  if (pos + 1 < n) return seq.box_index_of[static_cast<std::size_t>(pos) + 1];
  return seq.box_index_of[static_cast<std::size_t>(pos) - 1];
}

std::vector<int> sentence_gold_tags(const TokenSequence& seq, const std::vector<Span>& spans,
                                    std::size_t n_slots) {
  std::vector<int> tags(n_slots, kTagO);
  for (const Span& s : spans) {
    const int first = owning_subtitle(seq, s.start);
    const int last = owning_subtitle(seq, s.end);
    if (first < 0 || static_cast<std::size_t>(first) >= n_slots) continue;
    tags[static_cast<std::size_t>(first)] = kTagB;
    for (int i = first + 1; i <= last && static_cast<std::size_t>(i) < n_slots; ++i) {
      if (tags[static_cast<std::size_t>(i)] == kTagO) tags[static_cast<std::size_t>(i)] = kTagI;
    }
  }
  return tags;
}

}  // namespace vog
