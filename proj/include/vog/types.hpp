#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vog {

// Label ids, shared by tagging and the CRF. Ties in decoding break toward the
// lower id, so the order here is part of the observable behaviour.
enum Bio : int { kTagB = 0, kTagI = 1, kTagO = 2 };
enum Edit : int { kTagKeep = 0, kTagDelete = 1 };

enum class TagScheme { kBio, kKeepDelete };

/// One OCR text box: what was recognized, when, and where on the frame.
struct SubtitleBox {
  std::string text;       // UTF-8, non-empty after trimming
  double timestamp = 0;   // seconds
  double top_margin = 0;  // pixels
  double left_margin = 0;
  double height = 0;
  double width = 0;
};

/// A video's ordered subtitle boxes plus its frame geometry.
struct VideoDocument {
  std::string video_id;
  double frame_height = 0;  // pixels
  double frame_width = 0;
  std::vector<SubtitleBox> boxes;  // non-decreasing timestamps

  // Throws geometry/parse errors when an invariant fails. `where` prefixes
  // the message (file:line context from readers).
  void validate(const std::string& where = "") const;
};

/// Relative-position and per-character-area features of one token's box.
struct VisualTriple {
  double rel_top = 0;    // top margin / frame height
  double rel_left = 0;   // left margin / frame width
  double char_area = 0;  // box area / (frame area * box character count)
};

/// The comma-joined character stream a tagger consumes. All vectors have the
/// same length; separators have box_index -1 and zero visual features.
struct TokenSequence {
  std::vector<char32_t> tokens;
  std::vector<VisualTriple> visual;
  std::vector<double> timestamp_of;
  std::vector<int> box_index_of;  // -1 for inserted separators
  bool truncated = false;

  std::size_t size() const { return tokens.size(); }
};

struct TagSequence {
  std::vector<int> tags;
  TagScheme scheme = TagScheme::kBio;

  std::size_t size() const { return tags.size(); }
};

/// Gold annotation for one outline: where the segment starts, which token
/// span holds the heading, and the final (rewritten) heading text.
struct OutlineAnnotation {
  double segmentation_time = 0;
  int span_start = 0;  // token indices, inclusive
  int span_end = 0;
  std::string rewritten;  // UTF-8
};

/// An article used for heading-detection pretraining.
struct ArticleRecord {
  std::string article_id;
  struct Block {
    std::string text;
    bool is_heading = false;
  };
  std::vector<Block> blocks;

  int heading_count() const;
};

/// Character vocabulary with reserved padding and unknown ids.
class Vocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;

  Vocabulary() = default;
  // Characters are stored sorted by codepoint; building is order-independent.
  static Vocabulary from_codepoints(const std::vector<char32_t>& chars);

  int id_of(char32_t cp) const;
  std::vector<int> encode(const std::vector<char32_t>& tokens) const;
  int size() const { return static_cast<int>(chars_.size()) + 2; }
  const std::vector<char32_t>& codepoints() const { return chars_; }

 private:
  std::vector<char32_t> chars_;           // sorted
  std::map<char32_t, int> ids_;
};

}  // namespace vog
