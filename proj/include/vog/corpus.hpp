#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vog/types.hpp"

namespace vog {

// Separator inserted between consecutive subtitle texts (replaces the
// original time markers).
inline constexpr char32_t kSeparator = U',';

/// Collapses runs of consecutive boxes with identical text to the
/// earliest-timestamp box. Non-adjacent repeats are kept.
VideoDocument dedup_subtitles(const VideoDocument& doc);

/// Joins box texts with single separator tokens, carrying per-token
/// timestamps and box indices. A separator inherits the preceding box's
/// timestamp. Truncates to max_len and flags it; visual features start at
/// zero until compute_visual_features fills them.
TokenSequence build_token_sequence(const VideoDocument& doc, std::size_t max_len);

/// Fills the per-token visual triples from box geometry: relative top and
/// left margins, and box area over frame area per character of the box text.
/// Separators keep (0,0,0).
void compute_visual_features(const VideoDocument& doc, TokenSequence& seq);

struct Span {
  int start = 0;  // inclusive token indices
  int end = 0;
};

/// B at each span start, I inside, O elsewhere. Spans must be in bounds and
/// pairwise disjoint.
TagSequence spans_to_tags(std::size_t sequence_length, const std::vector<Span>& spans);
TagSequence spans_to_tags(const TokenSequence& seq, const std::vector<OutlineAnnotation>& annotations);

/// Converts an article into a pretraining example: blocks joined by comma
/// separators, heading characters tagged B/I, everything else O. Returns
/// nothing for articles with fewer than 3 headings (callers count those).
std::optional<std::pair<TokenSequence, TagSequence>> build_heading_pretrain_example(
    const ArticleRecord& article, std::size_t max_len);

/// Characters occurring in the corpus, for vocabulary construction.
std::vector<char32_t> collect_characters(const std::vector<VideoDocument>& docs);
std::vector<char32_t> collect_characters(const std::vector<ArticleRecord>& articles);

// ---- Sentence-level view (one slot per subtitle) ----

/// Slot positions for sentence-level tagging: token 0 stands in for the
/// first subtitle, and each separator stands in for the subtitle after it.
/// A trailing separator with no following token yields no slot.
std::vector<int> sentence_slots(const TokenSequence& seq);

/// The subtitle a token position is attributed to: its own box, or for a
/// separator the following box.
int owning_subtitle(const TokenSequence& seq, int pos);

/// Per-subtitle B/I/O gold derived from token-level spans: B where a span
/// starts, I where it continues into further subtitles.
std::vector<int> sentence_gold_tags(const TokenSequence& seq, const std::vector<Span>& spans,
                                    std::size_t n_slots);

}  // namespace vog
