#include "vog/extraction.hpp"

#include <set>

#include "vog/utf8.hpp"

namespace vog {

namespace {

// Timestamp of the first content (non-separator) token in [start, end];
// falls back to the span start's inherited timestamp for all-separator spans.
double back_trace_time(const TokenSequence& seq, int start, int end) {
  for (int k = start; k <= end; ++k) {
    if (seq.box_index_of[static_cast<std::size_t>(k)] >= 0)
      return seq.timestamp_of[static_cast<std::size_t>(k)];
  }
  return seq.timestamp_of[static_cast<std::size_t>(start)];
}

std::string span_text(const TokenSequence& seq, int start, int end) {
  return utf8_encode(seq.tokens.data() + start, static_cast<std::size_t>(end - start + 1));
}

std::vector<int> encode_ids(const Vocabulary& vocab, const TokenSequence& seq) {
  return vocab.encode(seq.tokens);
}

}  // namespace

std::vector<Span> decode_bio(const TagSequence& tags) {
  std::vector<Span> spans;
  int open = -1;
  for (int k = 0; k < static_cast<int>(tags.size()); ++k) {
    const int t = tags.tags[static_cast<std::size_t>(k)];
    if (t == kTagB) {
      if (open >= 0) spans.push_back({open, k - 1});
      open = k;
    } else if (t == kTagI) {
      if (open < 0) open = k;  // orphan I opens a span
    } else {
      if (open >= 0) spans.push_back({open, k - 1});
      open = -1;
    }
  }
  if (open >= 0) spans.push_back({open, static_cast<int>(tags.size()) - 1});
  return spans;
}

std::vector<JointGroup> joint_groups(const TagSequence& tags) {
  std::vector<JointGroup> groups;
  JointGroup cur;
  bool open = false;
  auto close = [&]() {
    if (open) {
      cur.span.end = cur.kept.back();
      groups.push_back(cur);
    }
    open = false;
  };
  for (int k = 0; k < static_cast<int>(tags.size()); ++k) {
    const int t = tags.tags[static_cast<std::size_t>(k)];
    if (t == kTagB) {
      close();
      cur = JointGroup{};
      cur.span.start = k;
      cur.kept = {k};
      open = true;
    } else if (t == kTagI) {
      if (open) {
        cur.kept.push_back(k);
      } else {
        cur = JointGroup{};
        cur.span.start = k;
        cur.kept = {k};
        open = true;
      }
    }
    // O keeps the current group open: tagged positions may be non-contiguous.
  }
  close();
  return groups;
}

Matrix visual_matrix(const TokenSequence& seq) {
  Matrix m(static_cast<Eigen::Index>(seq.size()), 3);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    m(static_cast<Eigen::Index>(k), 0) = seq.visual[k].rel_top;
    m(static_cast<Eigen::Index>(k), 1) = seq.visual[k].rel_left;
    m(static_cast<Eigen::Index>(k), 2) = seq.visual[k].char_area;
  }
  return m;
}

std::vector<OutlineSpan> extract(const TaggerModel& model, const Vocabulary& vocab,
                                 const TokenSequence& seq, bool constrained) {
  if (seq.size() == 0) return {};
  TagSequence tags;
  tags.scheme = TagScheme::kBio;
  tags.tags = model.predict(encode_ids(vocab, seq), visual_matrix(seq), constrained);
  std::vector<OutlineSpan> out;
  for (const Span& s : decode_bio(tags)) {
    OutlineSpan os;
    os.start = s.start;
    os.end = s.end;
    os.text = span_text(seq, s.start, s.end);
    os.segmentation_time = back_trace_time(seq, s.start, s.end);
    out.push_back(std::move(os));
  }
  return out;
}

std::vector<OutlineSpan> joint_extract(const TaggerModel& model, const Vocabulary& vocab,
                                       const TokenSequence& seq) {
  if (seq.size() == 0) return {};
  TagSequence tags;
  tags.scheme = TagScheme::kBio;
  tags.tags = model.predict(encode_ids(vocab, seq), visual_matrix(seq), false);
  std::vector<OutlineSpan> out;
  for (const JointGroup& g : joint_groups(tags)) {
    OutlineSpan os;
    os.start = g.span.start;
    os.end = g.span.end;
    std::vector<char32_t> kept_chars;
    kept_chars.reserve(g.kept.size());
    double time = -1;
    for (int pos : g.kept) {
      kept_chars.push_back(seq.tokens[static_cast<std::size_t>(pos)]);
      if (time < 0 && seq.box_index_of[static_cast<std::size_t>(pos)] >= 0)
        time = seq.timestamp_of[static_cast<std::size_t>(pos)];
    }
    os.text = utf8_encode(kept_chars);
    os.segmentation_time = time >= 0 ? time : seq.timestamp_of[static_cast<std::size_t>(g.span.start)];
    out.push_back(std::move(os));
  }
  return out;
}

std::vector<OutlineSpan> sentence_extract(const TaggerModel& model, const Vocabulary& vocab,
                                          const TokenSequence& seq, bool constrained) {
  if (seq.size() == 0) return {};
  const std::vector<int> slots = sentence_slots(seq);
  TagSequence stags;
  stags.scheme = TagScheme::kBio;
  stags.tags = model.predict(encode_ids(vocab, seq), visual_matrix(seq), constrained, &slots);

  auto subtitle_start = [&](int i) { return slots[static_cast<std::size_t>(i)] == 0 ? 0 : slots[static_cast<std::size_t>(i)] + 1; };
  auto subtitle_end = [&](int i) {
    return i + 1 < static_cast<int>(slots.size()) ? slots[static_cast<std::size_t>(i) + 1] - 1
                                                  : static_cast<int>(seq.size()) - 1;
  };

  std::vector<OutlineSpan> out;
  for (const Span& s : decode_bio(stags)) {
    OutlineSpan os;
    os.start = subtitle_start(s.start);
    os.end = subtitle_end(s.end);
    os.text = span_text(seq, os.start, os.end);
    os.segmentation_time = back_trace_time(seq, os.start, os.end);
    out.push_back(std::move(os));
  }
  return out;
}

std::vector<PredictionRecord> predict_document(const TaggerModel& model, const Vocabulary& vocab,
                                               const VideoDocument& doc, std::size_t max_len,
                                               bool constrained, const RewriteFn& rewrite) {
  const VideoDocument deduped = dedup_subtitles(doc);
  TokenSequence seq = build_token_sequence(deduped, max_len);
  compute_visual_features(deduped, seq);

  std::vector<OutlineSpan> spans;
  if (model.spec().joint_deletion)
    spans = joint_extract(model, vocab, seq);
  else if (model.spec().sentence_level)
    spans = sentence_extract(model, vocab, seq, constrained);
  else
    spans = extract(model, vocab, seq, constrained);

  // One outline per segmentation time: the first span wins.
  std::set<double> seen;
  std::vector<PredictionRecord> records;
  for (const OutlineSpan& s : spans) {
    if (!seen.insert(s.segmentation_time).second) continue;
    PredictionRecord r;
    r.video_id = doc.video_id;
    r.t = s.segmentation_time;
    r.span_start = s.start;
    r.span_end = s.end;
    r.span_text = s.text;
    r.heading = rewrite ? rewrite(s.text) : s.text;
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace vog
