#include "vog/encoder.hpp"

#include <cmath>

namespace vog {

namespace {

constexpr double kMaskScore = -1e9;
constexpr double kLnEps = 1e-5;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

std::string layer_prefix(int i) { return "layer" + std::to_string(i) + "."; }

Matrix linear(const Matrix& x, const Matrix& w, const Matrix& b) {
  Matrix y = x * w;
  y.rowwise() += b.row(0);
  return y;
}

// dY -> dX; accumulates weight and bias gradients.
Matrix linear_backward(const Matrix& x, const Matrix& d_y, const Matrix& w, Matrix& d_w, Matrix& d_b) {
  d_w.noalias() += x.transpose() * d_y;
  d_b.row(0) += d_y.colwise().sum();
  return d_y * w.transpose();
}

Matrix layer_norm(const Matrix& x, const Matrix& g, const Matrix& b, LayerNormCache& cache) {
  const Eigen::Index n = x.rows(), d = x.cols();
  cache.in = x;
  cache.mean.resize(n);
  cache.inv_std.resize(n);
  Matrix y(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double mean = x.row(r).mean();
    const double var = (x.row(r).array() - mean).square().sum() / static_cast<double>(d);
    const double inv_std = 1.0 / std::sqrt(var + kLnEps);
    cache.mean(r) = mean;
    cache.inv_std(r) = inv_std;
    y.row(r) = ((x.row(r).array() - mean) * inv_std * g.row(0).array() + b.row(0).array()).matrix();
  }
  return y;
}

Matrix layer_norm_backward(const LayerNormCache& cache, const Matrix& d_y, const Matrix& g,
                           Matrix& d_g, Matrix& d_b) {
  const Eigen::Index n = cache.in.rows(), d = cache.in.cols();
  Matrix d_x(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::ArrayXd xhat = (cache.in.row(r).array() - cache.mean(r)) * cache.inv_std(r);
    d_b.row(0).array() += d_y.row(r).array();
    d_g.row(0).array() += d_y.row(r).array() * xhat.transpose();
    const Eigen::ArrayXd dxhat = d_y.row(r).array().transpose() * g.row(0).array().transpose();
    const double m1 = dxhat.mean();
    const double m2 = (dxhat * xhat).mean();
    d_x.row(r) = (cache.inv_std(r) * (dxhat - m1 - xhat * m2)).matrix().transpose();
  }
  return d_x;
}

Matrix gelu(const Matrix& x) {
  return x.unaryExpr([](double v) { return 0.5 * v * (1.0 + std::erf(v * 0.7071067811865475)); });
}

Matrix gelu_grad(const Matrix& x) {
  return x.unaryExpr([](double v) {
    return 0.5 * (1.0 + std::erf(v * 0.7071067811865475)) + v * kInvSqrt2Pi * std::exp(-0.5 * v * v);
  });
}

// Inverted dropout multipliers (0 or 1/(1-p)), drawn row-major.
Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  Matrix mask(rows, cols);
  const double keep = 1.0 / (1.0 - p);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) mask(r, c) = rng.next_double() < p ? 0.0 : keep;
  return mask;
}

}  // namespace

void EncoderConfig::validate() const {
  if (vocab_size < 2) throw config_error("vocab_size must be at least 2");
  if (model_dim <= 0 || layers <= 0 || heads <= 0 || ffn_dim <= 0 || max_positions <= 0)
    throw config_error("encoder dimensions must be positive");
  if (model_dim % heads != 0) throw config_error("model_dim must be divisible by heads");
  if (dropout < 0.0 || dropout >= 1.0) throw config_error("dropout must be in [0, 1)");
}

Encoder::Encoder(const EncoderConfig& cfg, ParamStore& params, Rng& init_rng)
    : cfg_(cfg), params_(&params) {
  cfg_.validate();
  const int d = cfg_.model_dim;
  init_normal(params.add("emb.token", cfg_.vocab_size, d), init_rng, 0.02);
  init_normal(params.add("emb.pos", cfg_.max_positions, d), init_rng, 0.02);
  init_constant(params.add("emb.ln.g", 1, d), 1.0);
  params.add("emb.ln.b", 1, d);
  for (int i = 0; i < cfg_.layers; ++i) {
    const std::string p = layer_prefix(i);
    init_normal(params.add(p + "attn.wq", d, d), init_rng, 0.02);
    params.add(p + "attn.bq", 1, d);
    init_normal(params.add(p + "attn.wk", d, d), init_rng, 0.02);
    params.add(p + "attn.bk", 1, d);
    init_normal(params.add(p + "attn.wv", d, d), init_rng, 0.02);
    params.add(p + "attn.bv", 1, d);
    init_normal(params.add(p + "attn.wo", d, d), init_rng, 0.02);
    params.add(p + "attn.bo", 1, d);
    init_constant(params.add(p + "ln1.g", 1, d), 1.0);
    params.add(p + "ln1.b", 1, d);
    init_normal(params.add(p + "ffn.w1", d, cfg_.ffn_dim), init_rng, 0.02);
    params.add(p + "ffn.b1", 1, cfg_.ffn_dim);
    init_normal(params.add(p + "ffn.w2", cfg_.ffn_dim, d), init_rng, 0.02);
    params.add(p + "ffn.b2", 1, d);
    init_constant(params.add(p + "ln2.g", 1, d), 1.0);
    params.add(p + "ln2.b", 1, d);
  }
}

Matrix Encoder::forward(const std::vector<int>& ids, const std::vector<bool>* pad_mask, bool train,
                        Rng* dropout_rng, EncoderCache* cache) const {
  const int n = static_cast<int>(ids.size());
  const int d = cfg_.model_dim;
  if (n == 0) throw shape_error("empty token sequence");
  if (n > cfg_.max_positions) throw shape_error("sequence longer than max positions");
  for (int id : ids) {
    if (id < 0 || id >= cfg_.vocab_size) throw shape_error("token id out of range");
  }
  if (pad_mask != nullptr && static_cast<int>(pad_mask->size()) != n)
    throw shape_error("padding mask length mismatch");
  const bool drop = train && cfg_.dropout > 0.0 && dropout_rng != nullptr;

  EncoderCache local;
  EncoderCache& c = cache != nullptr ? *cache : local;
  c.ids = ids;
  c.layers.assign(static_cast<std::size_t>(cfg_.layers), LayerCache{});
  if (pad_mask != nullptr) {
    c.key_mask = RowVector::Zero(n);
    for (int k = 0; k < n; ++k) c.key_mask(k) = (*pad_mask)[static_cast<std::size_t>(k)] ? 0.0 : kMaskScore;
  } else {
    c.key_mask.resize(0);
  }

  const ParamStore& ps = *params_;
  Matrix x(n, d);
  for (int k = 0; k < n; ++k)
    x.row(k) = ps.value("emb.token").row(ids[static_cast<std::size_t>(k)]) + ps.value("emb.pos").row(k);
  Matrix h = layer_norm(x, ps.value("emb.ln.g"), ps.value("emb.ln.b"), c.emb_ln);
  if (drop) {
    c.emb_drop = dropout_mask(n, d, cfg_.dropout, *dropout_rng);
    h = h.cwiseProduct(c.emb_drop);
  } else {
    c.emb_drop.resize(0, 0);
  }
  c.emb_out = h;

  const int nh = cfg_.heads;
  const int dh = d / nh;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  for (int i = 0; i < cfg_.layers; ++i) {
    const std::string p = layer_prefix(i);
    LayerCache& lc = c.layers[static_cast<std::size_t>(i)];
    AttentionCache& ac = lc.attn;
    ac.in = h;
    ac.q = linear(h, ps.value(p + "attn.wq"), ps.value(p + "attn.bq"));
    ac.k = linear(h, ps.value(p + "attn.wk"), ps.value(p + "attn.bk"));
    ac.v = linear(h, ps.value(p + "attn.wv"), ps.value(p + "attn.bv"));
    ac.probs.resize(static_cast<std::size_t>(nh));
    ac.ctx.resize(n, d);
    for (int hd = 0; hd < nh; ++hd) {
      Matrix scores = ac.q.middleCols(hd * dh, dh) * ac.k.middleCols(hd * dh, dh).transpose() * scale;
      if (c.key_mask.size() > 0) scores.rowwise() += c.key_mask;
      ac.probs[static_cast<std::size_t>(hd)] = softmax_rows(scores);
      ac.ctx.middleCols(hd * dh, dh) =
          ac.probs[static_cast<std::size_t>(hd)] * ac.v.middleCols(hd * dh, dh);
    }
    Matrix attn_out = linear(ac.ctx, ps.value(p + "attn.wo"), ps.value(p + "attn.bo"));
    if (drop) {
      lc.attn_drop = dropout_mask(n, d, cfg_.dropout, *dropout_rng);
      attn_out = attn_out.cwiseProduct(lc.attn_drop);
    } else {
      lc.attn_drop.resize(0, 0);
    }
    Matrix r1 = h + attn_out;
    lc.ln1_out = layer_norm(r1, ps.value(p + "ln1.g"), ps.value(p + "ln1.b"), lc.ln1);

    lc.ffn_pre = linear(lc.ln1_out, ps.value(p + "ffn.w1"), ps.value(p + "ffn.b1"));
    Matrix ffn_out = linear(gelu(lc.ffn_pre), ps.value(p + "ffn.w2"), ps.value(p + "ffn.b2"));
    if (drop) {
      lc.ffn_drop = dropout_mask(n, d, cfg_.dropout, *dropout_rng);
      ffn_out = ffn_out.cwiseProduct(lc.ffn_drop);
    } else {
      lc.ffn_drop.resize(0, 0);
    }
    Matrix r2 = lc.ln1_out + ffn_out;
    h = layer_norm(r2, ps.value(p + "ln2.g"), ps.value(p + "ln2.b"), lc.ln2);
    lc.out = h;
  }
  c.out = h;
  return h;
}

void Encoder::backward(const EncoderCache& c, const Matrix& d_out) const {
  ParamStore& ps = *params_;
  const int n = static_cast<int>(c.ids.size());
  const int d = cfg_.model_dim;
  const int nh = cfg_.heads;
  const int dh = d / nh;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  if (d_out.rows() != n || d_out.cols() != d) throw shape_error("bad gradient shape");

  Matrix dh_cur = d_out;
  for (int i = cfg_.layers - 1; i >= 0; --i) {
    const std::string p = layer_prefix(i);
    const LayerCache& lc = c.layers[static_cast<std::size_t>(i)];

    Matrix d_r2 = layer_norm_backward(lc.ln2, dh_cur, ps.value(p + "ln2.g"), ps.grad(p + "ln2.g"),
                                      ps.grad(p + "ln2.b"));
    Matrix d_ln1_out = d_r2;  // residual branch
    Matrix d_ffn_out = lc.ffn_drop.size() > 0 ? d_r2.cwiseProduct(lc.ffn_drop) : d_r2;

    Matrix d_ffn_act = linear_backward(gelu(lc.ffn_pre), d_ffn_out, ps.value(p + "ffn.w2"),
                                       ps.grad(p + "ffn.w2"), ps.grad(p + "ffn.b2"));
    Matrix d_ffn_pre = d_ffn_act.cwiseProduct(gelu_grad(lc.ffn_pre));
    d_ln1_out += linear_backward(lc.ln1_out, d_ffn_pre, ps.value(p + "ffn.w1"), ps.grad(p + "ffn.w1"),
                                 ps.grad(p + "ffn.b1"));

    Matrix d_r1 = layer_norm_backward(lc.ln1, d_ln1_out, ps.value(p + "ln1.g"), ps.grad(p + "ln1.g"),
                                      ps.grad(p + "ln1.b"));
    Matrix d_in = d_r1;  // residual branch
    Matrix d_attn_out = lc.attn_drop.size() > 0 ? d_r1.cwiseProduct(lc.attn_drop) : d_r1;

    const AttentionCache& ac = lc.attn;
    Matrix d_ctx = linear_backward(ac.ctx, d_attn_out, ps.value(p + "attn.wo"),
                                   ps.grad(p + "attn.wo"), ps.grad(p + "attn.bo"));
    Matrix d_q(n, d), d_k(n, d), d_v(n, d);
    for (int hd = 0; hd < nh; ++hd) {
      const Matrix& probs = ac.probs[static_cast<std::size_t>(hd)];
      const auto qh = ac.q.middleCols(hd * dh, dh);
      const auto kh = ac.k.middleCols(hd * dh, dh);
      const auto vh = ac.v.middleCols(hd * dh, dh);
      const auto d_ctx_h = d_ctx.middleCols(hd * dh, dh);

      Matrix d_probs = d_ctx_h * vh.transpose();
      d_v.middleCols(hd * dh, dh) = probs.transpose() * d_ctx_h;
      // softmax backward, row-wise
      const Eigen::VectorXd row_dot = probs.cwiseProduct(d_probs).rowwise().sum();
      Matrix d_scores = probs.cwiseProduct((d_probs.colwise() - row_dot).eval());
      d_scores *= scale;
      d_q.middleCols(hd * dh, dh) = d_scores * kh;
      d_k.middleCols(hd * dh, dh) = d_scores.transpose() * qh;
    }
    d_in += linear_backward(ac.in, d_q, ps.value(p + "attn.wq"), ps.grad(p + "attn.wq"),
                            ps.grad(p + "attn.bq"));
    d_in += linear_backward(ac.in, d_k, ps.value(p + "attn.wk"), ps.grad(p + "attn.wk"),
                            ps.grad(p + "attn.bk"));
    d_in += linear_backward(ac.in, d_v, ps.value(p + "attn.wv"), ps.grad(p + "attn.wv"),
                            ps.grad(p + "attn.bv"));
    dh_cur = d_in;
  }

  Matrix d_emb = c.emb_drop.size() > 0 ? dh_cur.cwiseProduct(c.emb_drop) : dh_cur;
  Matrix d_x = layer_norm_backward(c.emb_ln, d_emb, ps.value("emb.ln.g"), ps.grad("emb.ln.g"),
                                   ps.grad("emb.ln.b"));
  Matrix& d_tok = ps.grad("emb.token");
  Matrix& d_pos = ps.grad("emb.pos");
  for (int k = 0; k < n; ++k) {
    d_tok.row(c.ids[static_cast<std::size_t>(k)]) += d_x.row(k);
    d_pos.row(k) += d_x.row(k);
  }
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    Eigen::ArrayXd e = (logits.row(r).array() - m).exp();
    out.row(r) = (e / e.sum()).matrix().transpose();
  }
  return out;
}

Matrix fuse_gate(const Matrix& ht, const Matrix& hv, const Matrix& w, const Matrix& b,
                 GateActivation act, GateCache* cache) {
  if (hv.rows() != ht.rows() || hv.cols() != w.rows() || w.cols() != ht.cols())
    throw shape_error("gate fusion shape mismatch");
  Matrix pre = hv * w;
  pre.rowwise() += b.row(0);
  Matrix gate = act == GateActivation::kRelu
                    ? pre.cwiseMax(0.0).eval()
                    : pre.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); }).eval();
  if (cache != nullptr) {
    cache->ht = ht;
    cache->hv = hv;
    cache->pre = pre;
    cache->gate = gate;
  }
  return gate.cwiseProduct(ht);
}

Matrix fuse_gate_backward(const GateCache& cache, const Matrix& d_out, GateActivation act, Matrix& dw,
                          Matrix& db) {
  Matrix d_gate = d_out.cwiseProduct(cache.ht);
  Matrix act_grad = act == GateActivation::kRelu
                        ? cache.pre.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }).eval()
                        : cache.gate.cwiseProduct(Matrix::Ones(cache.gate.rows(), cache.gate.cols()) -
                                                  cache.gate)
                              .eval();
  Matrix d_pre = d_gate.cwiseProduct(act_grad);
  dw.noalias() += cache.hv.transpose() * d_pre;
  db.row(0) += d_pre.colwise().sum();
  return d_out.cwiseProduct(cache.gate);
}

Matrix fuse_concat(const Matrix& ht, const Matrix& hv, const Matrix& proj, const Matrix& bias,
                   ConcatCache* cache) {
  if (hv.rows() != ht.rows() || proj.rows() != ht.cols() + hv.cols() || proj.cols() != ht.cols())
    throw shape_error("concat fusion shape mismatch");
  Matrix z(ht.rows(), ht.cols() + hv.cols());
  z << ht, hv;
  if (cache != nullptr) cache->z = z;
  Matrix out = z * proj;
  out.rowwise() += bias.row(0);
  return out;
}

Matrix fuse_concat_backward(const ConcatCache& cache, const Matrix& d_out, const Matrix& proj,
                            Matrix& d_proj, Matrix& d_bias) {
  d_proj.noalias() += cache.z.transpose() * d_out;
  d_bias.row(0) += d_out.colwise().sum();
  Matrix d_z = d_out * proj.transpose();
  return d_z.leftCols(proj.cols());
}

}  // namespace vog
