#pragma once

#include <map>
#include <string>
#include <vector>

#include "vog/types.hpp"

namespace vog {

/// Collects reader warnings (unknown fields, suspicious records). Readers
/// never fail on a warning; the CLI forwards them to stderr.
struct Warnings {
  std::vector<std::string> messages;
  void add(std::string m) { messages.push_back(std::move(m)); }
  std::size_t count() const { return messages.size(); }
};

/// A prediction for one outline: the segmentation time plus the extracted
/// span and its final heading.
struct PredictionRecord {
  std::string video_id;
  double t = 0;
  int span_start = 0;
  int span_end = 0;
  std::string span_text;
  std::string heading;
};

// Line-delimited record formats. One JSON object per line; unknown fields
// warn, missing fields raise a parse error carrying file:line.

std::vector<VideoDocument> read_subtitle_file(const std::string& path, Warnings& warnings);
void write_subtitle_file(const std::string& path, const std::vector<VideoDocument>& docs);

/// Annotations grouped by video id, file order preserved within a video.
std::map<std::string, std::vector<OutlineAnnotation>> read_annotation_file(const std::string& path,
                                                                           Warnings& warnings);
void write_annotation_file(const std::string& path,
                           const std::map<std::string, std::vector<OutlineAnnotation>>& annotations);

std::vector<ArticleRecord> read_article_file(const std::string& path, Warnings& warnings);
void write_article_file(const std::string& path, const std::vector<ArticleRecord>& articles);

std::vector<PredictionRecord> read_prediction_file(const std::string& path, Warnings& warnings);
void write_prediction_file(const std::string& path, const std::vector<PredictionRecord>& predictions);

}  // namespace vog
