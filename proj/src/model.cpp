#include "vog/model.hpp"

#include <cmath>

namespace vog {

namespace {

// Argmax with ties toward the lower index.
int row_argmax(const Matrix& m, int row) {
  int best = 0;
  for (int j = 1; j < m.cols(); ++j) {
    if (m(row, j) > m(row, best)) best = j;
  }
  return best;
}

}  // namespace

ModelSpec ModelSpec::for_variant(const std::string& name) {
  ModelSpec s;
  s.variant = name;
  s.n_labels = 3;
  if (name == "JointBC") {
    s.head = HeadKind::kSoftmax;
    s.joint_deletion = true;
  } else if (name == "BC-base") {
    s.head = HeadKind::kCrf;
  } else if (name == "BC-PT") {
    s.head = HeadKind::kCrf;
    s.uses_pretraining = true;
  } else if (name == "VSEBert") {
    s.head = HeadKind::kSoftmax;
    s.uses_visual = true;
    s.fusion = Fusion::kGate;
    s.uses_pretraining = true;
  } else if (name == "VSENet") {
    s.head = HeadKind::kCrf;
    s.uses_visual = true;
    s.fusion = Fusion::kGate;
    s.uses_pretraining = true;
  } else if (name == "Sent-BC") {
    s.head = HeadKind::kCrf;
    s.sentence_level = true;
  } else {
    throw config_error("unknown variant \"" + name + "\"");
  }
  return s;
}

const std::vector<std::string>& ModelSpec::variant_names() {
  static const std::vector<std::string> kNames = {"JointBC", "BC-base", "BC-PT",
                                                  "VSEBert", "VSENet",  "Sent-BC"};
  return kNames;
}

ModelSpec ModelSpec::rewriter(HeadKind head) {
  ModelSpec s;
  s.variant = head == HeadKind::kCrf ? "rewriter-crf" : "rewriter-ff";
  s.n_labels = 2;
  s.head = head;
  return s;
}

TaggerModel::TaggerModel(const EncoderConfig& cfg, const ModelSpec& spec, std::uint64_t init_seed)
    : cfg_(cfg), spec_(spec) {
  Rng rng(init_seed);
  encoder_ = std::make_unique<Encoder>(cfg_, params_, rng);
  const int d = cfg_.model_dim;
  if (spec_.fusion == Fusion::kGate) {
    init_normal(params_.add("fuse.gate.w", 3, d), rng, 0.02);
    init_constant(params_.add("fuse.gate.b", 1, d), 1.0);  // near-identity gate at start
  } else if (spec_.fusion == Fusion::kConcat) {
    Matrix& proj = params_.add("fuse.cat.w", d + 3, d);
    proj.topRows(d) = Matrix::Identity(d, d);  // starts by passing Ht through
    params_.add("fuse.cat.b", 1, d);
  }
  init_normal(params_.add("head.w", d, spec_.n_labels), rng, 0.02);
  params_.add("head.b", 1, spec_.n_labels);
  if (spec_.head == HeadKind::kCrf) {
    params_.add("crf.transitions", spec_.n_labels, spec_.n_labels);
    params_.add("crf.start", 1, spec_.n_labels);
    params_.add("crf.end", 1, spec_.n_labels);
  }
}

CrfParams TaggerModel::crf_params() const {
  CrfParams p;
  p.transitions = params_.value("crf.transitions");
  p.start = params_.value("crf.start").row(0);
  p.end = params_.value("crf.end").row(0);
  return p;
}

Matrix TaggerModel::forward_hidden(const std::vector<int>& ids, const Matrix& visual, bool train,
                                   Rng* dropout_rng, EncoderCache* enc_cache, GateCache* gate_cache,
                                   ConcatCache* concat_cache) const {
  Matrix ht = encoder_->forward(ids, nullptr, train, dropout_rng, enc_cache);
  if (spec_.fusion == Fusion::kGate) {
    if (visual.rows() != ht.rows()) throw shape_error("visual feature rows mismatch");
    return fuse_gate(ht, visual, params_.value("fuse.gate.w"), params_.value("fuse.gate.b"),
                     spec_.gate_activation, gate_cache);
  }
  if (spec_.fusion == Fusion::kConcat) {
    if (visual.rows() != ht.rows()) throw shape_error("visual feature rows mismatch");
    return fuse_concat(ht, visual, params_.value("fuse.cat.w"), params_.value("fuse.cat.b"),
                       concat_cache);
  }
  return ht;
}

Matrix TaggerModel::head_logits(const Matrix& hidden) const {
  Matrix logits = hidden * params_.value("head.w");
  logits.rowwise() += params_.value("head.b").row(0);
  return logits;
}

Matrix TaggerModel::hidden_states(const std::vector<int>& ids, const Matrix& visual) const {
  return forward_hidden(ids, visual, false, nullptr, nullptr, nullptr, nullptr);
}

Matrix TaggerModel::emissions(const std::vector<int>& ids, const Matrix& visual) const {
  return head_logits(hidden_states(ids, visual));
}

Matrix TaggerModel::classify_tokens(const std::vector<int>& ids, const Matrix& visual) const {
  return softmax_rows(emissions(ids, visual));
}

double TaggerModel::example_loss(const SequenceExample& ex, bool train, Rng* dropout_rng,
                                 bool accumulate_grads, double grad_scale) {
  EncoderCache enc_cache;
  GateCache gate_cache;
  ConcatCache concat_cache;
  Matrix hidden =
      forward_hidden(ex.ids, ex.visual, train, dropout_rng, &enc_cache, &gate_cache, &concat_cache);
  Matrix logits = head_logits(hidden);

  const int n = static_cast<int>(logits.rows());
  const int L = spec_.n_labels;
  const bool sentence = spec_.sentence_level;
  const std::vector<int>& positions = ex.slots;  // used only for sentence models
  if (sentence && positions.empty()) throw shape_error("sentence-level example without slots");

  // Rows the loss reads: all tokens, or the slot rows for sentence models.
  Matrix scored;
  if (sentence) {
    scored.resize(static_cast<Eigen::Index>(positions.size()), L);
    for (std::size_t i = 0; i < positions.size(); ++i) scored.row(static_cast<Eigen::Index>(i)) = logits.row(positions[i]);
  } else {
    scored = logits;
  }
  if (static_cast<int>(ex.gold.size()) != scored.rows()) throw shape_error("gold tag length mismatch");

  double loss = 0.0;
  Matrix d_scored = Matrix::Zero(scored.rows(), L);
  if (spec_.head == HeadKind::kCrf) {
    CrfParams cp = crf_params();
    CrfGradients grads;
    loss = crf_nll(scored, cp, ex.gold, accumulate_grads ? &grads : nullptr, grad_scale);
    if (accumulate_grads) {
      d_scored = grads.emissions;
      params_.grad("crf.transitions") += grads.transitions;
      params_.grad("crf.start").row(0) += grads.start;
      params_.grad("crf.end").row(0) += grads.end;
    }
  } else {
    // Mean token cross-entropy.
    Matrix probs = softmax_rows(scored);
    const double inv = 1.0 / static_cast<double>(scored.rows());
    for (int r = 0; r < scored.rows(); ++r) {
      const int g = ex.gold[static_cast<std::size_t>(r)];
      if (g < 0 || g >= L) throw shape_error("gold tag out of range");
      loss -= std::log(std::max(probs(r, g), 1e-300)) * inv;
      if (accumulate_grads) {
        d_scored.row(r) = probs.row(r) * inv * grad_scale;
        d_scored(r, g) -= inv * grad_scale;
      }
    }
  }
  if (!std::isfinite(loss)) throw Error("numeric", "non-finite loss");
  if (!accumulate_grads) return loss;

  Matrix d_logits;
  if (sentence) {
    d_logits = Matrix::Zero(n, L);
    for (std::size_t i = 0; i < positions.size(); ++i)
      d_logits.row(positions[i]) += d_scored.row(static_cast<Eigen::Index>(i));
  } else {
    d_logits = d_scored;
  }

  // head
  params_.grad("head.w").noalias() += hidden.transpose() * d_logits;
  params_.grad("head.b").row(0) += d_logits.colwise().sum();
  Matrix d_hidden = d_logits * params_.value("head.w").transpose();

  // fusion
  Matrix d_ht;
  if (spec_.fusion == Fusion::kGate) {
    d_ht = fuse_gate_backward(gate_cache, d_hidden, spec_.gate_activation, params_.grad("fuse.gate.w"),
                              params_.grad("fuse.gate.b"));
  } else if (spec_.fusion == Fusion::kConcat) {
    d_ht = fuse_concat_backward(concat_cache, d_hidden, params_.value("fuse.cat.w"),
                                params_.grad("fuse.cat.w"), params_.grad("fuse.cat.b"));
  } else {
    d_ht = d_hidden;
  }
  encoder_->backward(enc_cache, d_ht);
  return loss;
}

double TaggerModel::example_loss(const SequenceExample& ex) const {
  // Losses never mutate the model; the const_cast only skips a parallel
  // read-only forward implementation.
  return const_cast<TaggerModel*>(this)->example_loss(ex, false, nullptr, false, 1.0);
}

std::vector<int> TaggerModel::predict(const std::vector<int>& ids, const Matrix& visual,
                                      bool constrained, const std::vector<int>* slots) const {
  Matrix logits = emissions(ids, visual);
  if (spec_.sentence_level) {
    if (slots == nullptr) throw shape_error("sentence-level prediction requires slots");
    Matrix reduced(static_cast<Eigen::Index>(slots->size()), logits.cols());
    for (std::size_t i = 0; i < slots->size(); ++i)
      reduced.row(static_cast<Eigen::Index>(i)) = logits.row((*slots)[i]);
    logits = reduced;
  }
  if (spec_.head == HeadKind::kCrf) {
    const CrfConstraints bio = CrfConstraints::bio();
    const CrfConstraints* c = constrained && spec_.n_labels == 3 ? &bio : nullptr;
    return crf_viterbi(logits, crf_params(), c);
  }
  std::vector<int> tags(static_cast<std::size_t>(logits.rows()));
  for (int r = 0; r < logits.rows(); ++r) tags[static_cast<std::size_t>(r)] = row_argmax(logits, r);
  return tags;
}

int TaggerModel::load_matching(const ParamStore& source) {
  int copied = 0;
  for (auto& [name, param] : params_.items()) {
    if (!source.has(name)) continue;
    const Matrix& src = source.at(name).value;
    if (src.rows() != param.value.rows() || src.cols() != param.value.cols()) continue;
    param.value = src;
    ++copied;
  }
  return copied;
}

}  // namespace vog
