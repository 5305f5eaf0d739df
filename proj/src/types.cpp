#include "vog/types.hpp"

#include <algorithm>

#include "vog/common.hpp"

namespace vog {

namespace {

bool is_blank(const std::string& text) {
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n') return false;
  }
  return true;
}

}  // namespace

void VideoDocument::validate(const std::string& where) const {
  const std::string at = where.empty() ? "video '" + video_id + "'" : where;
  if (frame_height <= 0 || frame_width <= 0)
    throw geometry_error(at + ": frame dimensions must be positive");
  if (boxes.empty()) throw parse_error(at + ": empty document");
  double prev_t = -1;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const SubtitleBox& b = boxes[i];
    const std::string bat = at + ", box " + std::to_string(i);
    if (b.text.empty() || is_blank(b.text)) throw parse_error(bat + ": empty text");
    if (b.height <= 0 || b.width <= 0) throw geometry_error(bat + ": box dimensions must be positive");
    if (b.top_margin < 0 || b.left_margin < 0) throw geometry_error(bat + ": negative margin");
    if (b.timestamp < 0) throw parse_error(bat + ": negative timestamp");
    if (b.top_margin + b.height > frame_height || b.left_margin + b.width > frame_width)
      throw geometry_error(bat + ": box exceeds frame bounds");
    if (b.timestamp < prev_t) throw parse_error(bat + ": timestamps not sorted");
    prev_t = b.timestamp;
  }
}

int ArticleRecord::heading_count() const {
  int n = 0;
  for (const auto& b : blocks) n += b.is_heading ? 1 : 0;
  return n;
}

Vocabulary Vocabulary::from_codepoints(const std::vector<char32_t>& chars) {
  Vocabulary v;
  v.chars_ = chars;
  std::sort(v.chars_.begin(), v.chars_.end());
  v.chars_.erase(std::unique(v.chars_.begin(), v.chars_.end()), v.chars_.end());
  for (std::size_t i = 0; i < v.chars_.size(); ++i)
    v.ids_[v.chars_[i]] = static_cast<int>(i) + 2;
  return v;
}

int Vocabulary::id_of(char32_t cp) const {
  auto it = ids_.find(cp);
  return it == ids_.end() ? kUnkId : it->second;
}

std::vector<int> Vocabulary::encode(const std::vector<char32_t>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (char32_t cp : tokens) ids.push_back(id_of(cp));
  return ids;
}

}  // namespace vog
