#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vog/corpus.hpp"
#include "vog/model.hpp"
#include "vog/records.hpp"

namespace vog {

/// An extracted heading span, back-traced to its segmentation time.
struct OutlineSpan {
  int start = 0;  // token indices, inclusive
  int end = 0;
  std::string text;               // UTF-8 of the span (kept characters only for joint decoding)
  double segmentation_time = 0;   // timestamp of the first content token in the span
};

/// Maximal B..I runs. An I with no live span opens one (output repair for
/// unconstrained heads).
std::vector<Span> decode_bio(const TagSequence& tags);

/// Joint decoding groups: a group runs from a B (or orphan I) to its last
/// tagged position before the next B; `kept` lists the B/I positions inside,
/// which may be non-contiguous.
struct JointGroup {
  Span span;
  std::vector<int> kept;
};
std::vector<JointGroup> joint_groups(const TagSequence& tags);

Matrix visual_matrix(const TokenSequence& seq);

/// Standard span extraction: tag, decode BIO, back-trace timestamps.
std::vector<OutlineSpan> extract(const TaggerModel& model, const Vocabulary& vocab,
                                 const TokenSequence& seq, bool constrained = true);

/// JointBC extraction: non-contiguous tags double as deletions, so the span
/// text keeps only tagged characters and no rewriting stage runs.
std::vector<OutlineSpan> joint_extract(const TaggerModel& model, const Vocabulary& vocab,
                                       const TokenSequence& seq);

/// Sentence-level extraction: one tag per subtitle, read at the separator
/// slots; a B..I run selects whole subtitle texts.
std::vector<OutlineSpan> sentence_extract(const TaggerModel& model, const Vocabulary& vocab,
                                          const TokenSequence& seq, bool constrained = true);

using RewriteFn = std::function<std::string(const std::string&)>;

/// Full per-document pipeline: dedup, tokenize, extract with the model's
/// decode mode, optionally rewrite each span, and keep the first span per
/// segmentation time. Records are ready for the prediction file format.
std::vector<PredictionRecord> predict_document(const TaggerModel& model, const Vocabulary& vocab,
                                               const VideoDocument& doc, std::size_t max_len,
                                               bool constrained = true,
                                               const RewriteFn& rewrite = nullptr);

}  // namespace vog
