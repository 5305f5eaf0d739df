#pragma once

#include <string>
#include <vector>

#include "vog/params.hpp"

namespace vog {

struct EncoderConfig {
  int vocab_size = 0;  // set from the vocabulary
  int model_dim = 64;
  int layers = 2;
  int heads = 4;
  int ffn_dim = 256;
  int max_positions = 512;
  double dropout = 0.1;

  void validate() const;
};

// Caches of forward activations needed by the backward pass.

struct LayerNormCache {
  Matrix in;
  Eigen::VectorXd mean;
  Eigen::VectorXd inv_std;
};

struct AttentionCache {
  Matrix in;
  Matrix q, k, v;
  std::vector<Matrix> probs;  // per head, (n x n)
  Matrix ctx;
};

struct LayerCache {
  AttentionCache attn;
  Matrix attn_drop;  // dropout multipliers; empty in eval mode
  LayerNormCache ln1;
  Matrix ln1_out;
  Matrix ffn_pre;
  Matrix ffn_drop;
  LayerNormCache ln2;
  Matrix out;
};

struct EncoderCache {
  std::vector<int> ids;
  RowVector key_mask;  // additive 0 / -1e9 per key; zero-size when unmasked
  LayerNormCache emb_ln;
  Matrix emb_drop;
  Matrix emb_out;
  std::vector<LayerCache> layers;
  Matrix out;
};

/// Transformer token encoder (learned absolute positions, post-layer-norm
/// blocks, GELU feed-forward) with a hand-written backward pass. Parameters
/// live in an external ParamStore under the "emb." and "layer<i>." prefixes.
class Encoder {
 public:
  Encoder(const EncoderConfig& cfg, ParamStore& params, Rng& init_rng);

  /// Contextual vectors, one row per token. `pad_mask`, when given, marks
  /// real positions with true; padded keys are excluded from attention and
  /// their output rows are meaningless. Deterministic when train is false.
  Matrix forward(const std::vector<int>& ids, const std::vector<bool>* pad_mask, bool train,
                 Rng* dropout_rng, EncoderCache* cache) const;

  /// Accumulates parameter gradients for a recorded forward pass.
  void backward(const EncoderCache& cache, const Matrix& d_out) const;

  const EncoderConfig& config() const { return cfg_; }

 private:
  EncoderConfig cfg_;
  ParamStore* params_;
};

// Row-wise softmax; each output row is a distribution.
Matrix softmax_rows(const Matrix& logits);

// ---- Visual fusion ----

enum class GateActivation { kRelu, kSigmoid };

struct GateCache {
  Matrix ht, hv, pre, gate;
};

/// Gate fusion: act(Hv W + b) elementwise-multiplied into Ht. The default
/// activation is ReLU; sigmoid gives a bounded gate.
Matrix fuse_gate(const Matrix& ht, const Matrix& hv, const Matrix& w, const Matrix& b,
                 GateActivation act, GateCache* cache = nullptr);
/// Returns d_ht and accumulates dw/db.
Matrix fuse_gate_backward(const GateCache& cache, const Matrix& d_out, GateActivation act, Matrix& dw,
                          Matrix& db);

struct ConcatCache {
  Matrix z;  // (n x (d+3)) concatenated input
};

/// Concatenation fusion: [Ht | Hv] projected back to model_dim.
Matrix fuse_concat(const Matrix& ht, const Matrix& hv, const Matrix& proj, const Matrix& bias,
                   ConcatCache* cache = nullptr);
Matrix fuse_concat_backward(const ConcatCache& cache, const Matrix& d_out, const Matrix& proj,
                            Matrix& d_proj, Matrix& d_bias);

}  // namespace vog
