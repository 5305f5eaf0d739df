#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vog/crf.hpp"
#include "vog/encoder.hpp"
#include "vog/types.hpp"

namespace vog {

enum class HeadKind { kSoftmax, kCrf };
enum class Fusion { kNone, kGate, kConcat };

/// How a tagger is assembled: which head, whether visual features are fused
/// in and how, and how its output is decoded.
struct ModelSpec {
  std::string variant = "custom";
  int n_labels = 3;
  HeadKind head = HeadKind::kCrf;
  Fusion fusion = Fusion::kNone;
  GateActivation gate_activation = GateActivation::kRelu;
  bool uses_visual = false;
  bool uses_pretraining = false;
  bool sentence_level = false;
  bool joint_deletion = false;  // B/I tags may be non-contiguous; O inside a span deletes

  /// The fixed flag combinations of the named extraction variants:
  /// JointBC (plain token head, joint deletion decode), BC-base (CRF),
  /// BC-PT (CRF + pretraining), VSEBert (visual + pretraining, no CRF),
  /// VSENet (CRF + visual + pretraining), Sent-BC (CRF per subtitle).
  static ModelSpec for_variant(const std::string& name);
  static const std::vector<std::string>& variant_names();

  /// Keep/Delete rewriter spec: 2 labels over span characters.
  static ModelSpec rewriter(HeadKind head);
};

/// One training item: token ids, per-token visual rows, gold tags. For
/// sentence-level models the gold tags align with `slots` instead of tokens.
struct SequenceExample {
  std::vector<int> ids;
  Matrix visual;  // (n x 3); ignored unless the model uses visual features
  std::vector<int> gold;
  std::vector<int> slots;
};

/// A trainable tagger: encoder, optional visual fusion, and a token
/// classification head with either softmax or CRF training/decoding.
class TaggerModel {
 public:
  TaggerModel(const EncoderConfig& cfg, const ModelSpec& spec, std::uint64_t init_seed);

  const EncoderConfig& config() const { return cfg_; }
  const ModelSpec& spec() const { return spec_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  /// Contextual vectors after fusion (eval mode).
  Matrix hidden_states(const std::vector<int>& ids, const Matrix& visual) const;

  /// Per-token label scores (eval mode).
  Matrix emissions(const std::vector<int>& ids, const Matrix& visual) const;

  /// Per-token label distributions: softmax over the head logits.
  Matrix classify_tokens(const std::vector<int>& ids, const Matrix& visual) const;

  /// Loss for one example; when accumulate_grads is set, parameter gradients
  /// scaled by grad_scale are added to the store. Throws on non-finite loss.
  double example_loss(const SequenceExample& ex, bool train, Rng* dropout_rng,
                      bool accumulate_grads, double grad_scale);

  /// Eval-mode loss without gradients.
  double example_loss(const SequenceExample& ex) const;

  /// Decoded tags, one per token (or per slot for sentence-level models).
  /// CRF heads use Viterbi; `constrained` masks invalid BIO structure at
  /// decode time. Softmax heads take the per-position argmax (ties toward
  /// the lower label).
  std::vector<int> predict(const std::vector<int>& ids, const Matrix& visual, bool constrained,
                           const std::vector<int>* slots = nullptr) const;

  CrfParams crf_params() const;

  /// Copies arrays with matching names and shapes from a pretraining
  /// checkpoint store (encoder and token head); returns how many were
  /// copied.
  int load_matching(const ParamStore& source);

 private:
  Matrix head_logits(const Matrix& hidden) const;
  Matrix forward_hidden(const std::vector<int>& ids, const Matrix& visual, bool train,
                        Rng* dropout_rng, EncoderCache* enc_cache, GateCache* gate_cache,
                        ConcatCache* concat_cache) const;

  EncoderConfig cfg_;
  ModelSpec spec_;
  ParamStore params_;
  std::unique_ptr<Encoder> encoder_;
};

}  // namespace vog
