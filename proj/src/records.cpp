#include "vog/records.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "vog/common.hpp"

namespace vog {

namespace {

using nlohmann::json;

json parse_line(const std::string& line, const std::string& at) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw parse_error(at + ": " + e.what());
  }
  if (!j.is_object()) throw parse_error(at + ": record is not an object");
  return j;
}

// Enforces the exact field set: unknown fields warn, missing fields error.
void check_fields(const json& j, const std::vector<std::string>& required, const std::string& at,
                  Warnings& warnings) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(required.begin(), required.end(), it.key()) == required.end())
      warnings.add(at + ": unknown field \"" + it.key() + "\" ignored");
  }
  for (const std::string& f : required) {
    if (!j.contains(f)) throw parse_error(at + ": missing field \"" + f + "\"");
  }
}

double get_number(const json& j, const std::string& key, const std::string& at) {
  if (!j.at(key).is_number()) throw parse_error(at + ": field \"" + key + "\" is not a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& at) {
  if (!j.at(key).is_number_integer()) throw parse_error(at + ": field \"" + key + "\" is not an integer");
  return j.at(key).get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& at) {
  if (!j.at(key).is_string()) throw parse_error(at + ": field \"" + key + "\" is not a string");
  return j.at(key).get<std::string>();
}

// Integral values serialize as integers so synthesized files stay tidy and
// re-serialization is idempotent.
json number(double v) {
  if (v == static_cast<double>(static_cast<long long>(v)) && std::abs(v) < 9e15)
    return json(static_cast<long long>(v));
  return json(v);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  return out;
}

}  // namespace

std::vector<VideoDocument> read_subtitle_file(const std::string& path, Warnings& warnings) {
  static const std::vector<std::string> kFields = {"video_id", "D_h", "D_w",  "t",  "text",
                                                   "d_tm",     "d_lm", "d_h", "d_w"};
  std::ifstream in = open_in(path);
  std::vector<VideoDocument> docs;
  std::set<std::string> finished_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string at = path + ":" + std::to_string(line_no);
    json j = parse_line(line, at);
    check_fields(j, kFields, at, warnings);

    const std::string vid = get_string(j, "video_id", at);
    SubtitleBox box;
    box.text = get_string(j, "text", at);
    box.timestamp = get_number(j, "t", at);
    box.top_margin = get_number(j, "d_tm", at);
    box.left_margin = get_number(j, "d_lm", at);
    box.height = get_number(j, "d_h", at);
    box.width = get_number(j, "d_w", at);
    const double fh = get_number(j, "D_h", at);
    const double fw = get_number(j, "D_w", at);

    if (docs.empty() || docs.back().video_id != vid) {
      if (finished_ids.count(vid)) throw parse_error(at + ": video \"" + vid + "\" reappears non-consecutively");
      if (!docs.empty()) finished_ids.insert(docs.back().video_id);
      VideoDocument doc;
      doc.video_id = vid;
      doc.frame_height = fh;
      doc.frame_width = fw;
      docs.push_back(std::move(doc));
    } else if (docs.back().frame_height != fh || docs.back().frame_width != fw) {
      throw parse_error(at + ": inconsistent frame dimensions for video \"" + vid + "\"");
    }
    docs.back().boxes.push_back(std::move(box));
  }
  for (VideoDocument& doc : docs) {
    std::stable_sort(doc.boxes.begin(), doc.boxes.end(),
                     [](const SubtitleBox& a, const SubtitleBox& b) { return a.timestamp < b.timestamp; });
    doc.validate(path + ": video '" + doc.video_id + "'");
  }
  if (docs.empty()) throw parse_error(path + ": no records");
  return docs;
}

void write_subtitle_file(const std::string& path, const std::vector<VideoDocument>& docs) {
  std::ofstream out = open_out(path);
  for (const VideoDocument& doc : docs) {
    for (const SubtitleBox& b : doc.boxes) {
      json j;
      j["video_id"] = doc.video_id;
      j["D_h"] = number(doc.frame_height);
      j["D_w"] = number(doc.frame_width);
      j["t"] = number(b.timestamp);
      j["text"] = b.text;
      j["d_tm"] = number(b.top_margin);
      j["d_lm"] = number(b.left_margin);
      j["d_h"] = number(b.height);
      j["d_w"] = number(b.width);
      out << j.dump() << "\n";
    }
  }
}

std::map<std::string, std::vector<OutlineAnnotation>> read_annotation_file(const std::string& path,
                                                                           Warnings& warnings) {
  static const std::vector<std::string> kFields = {"video_id", "t", "span_start", "span_end", "rewritten"};
  std::ifstream in = open_in(path);
  std::map<std::string, std::vector<OutlineAnnotation>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string at = path + ":" + std::to_string(line_no);
    json j = parse_line(line, at);
    check_fields(j, kFields, at, warnings);
    OutlineAnnotation a;
    a.segmentation_time = get_number(j, "t", at);
    a.span_start = get_int(j, "span_start", at);
    a.span_end = get_int(j, "span_end", at);
    a.rewritten = get_string(j, "rewritten", at);
    if (a.span_start > a.span_end) throw parse_error(at + ": span_start after span_end");
    if (a.span_start < 0) throw parse_error(at + ": negative span_start");
    out[get_string(j, "video_id", at)].push_back(std::move(a));
  }
  return out;
}

void write_annotation_file(const std::string& path,
                           const std::map<std::string, std::vector<OutlineAnnotation>>& annotations) {
  std::ofstream out = open_out(path);
  for (const auto& [vid, list] : annotations) {
    for (const OutlineAnnotation& a : list) {
      json j;
      j["video_id"] = vid;
      j["t"] = number(a.segmentation_time);
      j["span_start"] = a.span_start;
      j["span_end"] = a.span_end;
      j["rewritten"] = a.rewritten;
      out << j.dump() << "\n";
    }
  }
}

std::vector<ArticleRecord> read_article_file(const std::string& path, Warnings& warnings) {
  static const std::vector<std::string> kFields = {"article_id", "blocks"};
  static const std::vector<std::string> kBlockFields = {"text", "is_heading"};
  std::ifstream in = open_in(path);
  std::vector<ArticleRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string at = path + ":" + std::to_string(line_no);
    json j = parse_line(line, at);
    check_fields(j, kFields, at, warnings);
    ArticleRecord rec;
    rec.article_id = get_string(j, "article_id", at);
    if (!j.at("blocks").is_array()) throw parse_error(at + ": field \"blocks\" is not an array");
    for (const json& bj : j.at("blocks")) {
      if (!bj.is_object()) throw parse_error(at + ": block is not an object");
      check_fields(bj, kBlockFields, at, warnings);
      if (!bj.at("is_heading").is_boolean()) throw parse_error(at + ": \"is_heading\" is not a boolean");
      rec.blocks.push_back({get_string(bj, "text", at), bj.at("is_heading").get<bool>()});
    }
    if (rec.blocks.empty()) throw parse_error(at + ": article has no blocks");
    out.push_back(std::move(rec));
  }
  return out;
}

void write_article_file(const std::string& path, const std::vector<ArticleRecord>& articles) {
  std::ofstream out = open_out(path);
  for (const ArticleRecord& a : articles) {
    json blocks = json::array();
    for (const auto& b : a.blocks) blocks.push_back({{"text", b.text}, {"is_heading", b.is_heading}});
    json j;
    j["article_id"] = a.article_id;
    j["blocks"] = blocks;
    out << j.dump() << "\n";
  }
}

std::vector<PredictionRecord> read_prediction_file(const std::string& path, Warnings& warnings) {
  static const std::vector<std::string> kFields = {"video_id", "t",         "span_start",
                                                   "span_end", "span_text", "heading"};
  std::ifstream in = open_in(path);
  std::vector<PredictionRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string at = path + ":" + std::to_string(line_no);
    json j = parse_line(line, at);
    check_fields(j, kFields, at, warnings);
    PredictionRecord p;
    p.video_id = get_string(j, "video_id", at);
    p.t = get_number(j, "t", at);
    p.span_start = get_int(j, "span_start", at);
    p.span_end = get_int(j, "span_end", at);
    p.span_text = get_string(j, "span_text", at);
    p.heading = get_string(j, "heading", at);
    out.push_back(std::move(p));
  }
  return out;
}

void write_prediction_file(const std::string& path, const std::vector<PredictionRecord>& predictions) {
  std::ofstream out = open_out(path);
  for (const PredictionRecord& p : predictions) {
    json j;
    j["video_id"] = p.video_id;
    j["t"] = number(p.t);
    j["span_start"] = p.span_start;
    j["span_end"] = p.span_end;
    j["span_text"] = p.span_text;
    j["heading"] = p.heading;
    out << j.dump() << "\n";
  }
}

}  // namespace vog
