#include "life/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace life {

using nlohmann::json;

namespace {

constexpr double kClipHi = 30.0;
constexpr double kLnEps = 1e-5;
constexpr double kInputScale = 1.0 / 30.0;  // keeps activations O(1)

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

FingerprintFeature assemble_feature(const std::string& article_id,
                                    const std::vector<WordProbSeq>& seqs,
                                    std::size_t L) {
    if (L < 1) throw std::runtime_error("feature length must be >= 1");
    bool any = false;
    for (const auto& s : seqs)
        if (!s.words.empty()) any = true;
    if (!any) throw std::runtime_error("no scored words for article " + article_id);

    FingerprintFeature f;
    f.article_id = article_id;
    f.prompt_id = seqs.front().prompt_id;
    f.values.assign(L, 0.0);
    f.mask.assign(L, 0);
    std::size_t at = 0;
    for (const auto& s : seqs) {
        for (const auto& w : s.words) {
            if (at >= L) return f;  // truncate
            f.values[at] = std::clamp(-w.logprob, 0.0, kClipHi);
            f.mask[at] = 1;
            ++at;
        }
    }
    return f;
}

double bce_loss(const std::vector<double>& preds, const std::vector<int>& labels) {
    if (preds.size() != labels.size())
        throw std::runtime_error("preds/labels length mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        double p = std::clamp(preds[i], 1e-7, 1.0 - 1e-7);
        double y = static_cast<double>(labels[i]);
        loss += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    }
    return loss;
}

// ---------------------------------------------------------------------------
// parameter layout

void SeqModel::build_layout() {
    groups_.clear();
    std::size_t off = 0;
    auto add = [&](const std::string& name, std::size_t size) {
        groups_.push_back({name, off, size});
        off += size;
    };
    const std::size_t C = cfg_.conv_channels, K = cfg_.kernel, D = cfg_.dim,
                      F = cfg_.ff;
    if (cfg_.conv == ConvStage::Conv) {
        add("conv_w", C * K);
        add("conv_b", C);
        add("proj_w", D * C);
        add("proj_b", D);
    } else {
        add("lift_w", D);
        add("lift_b", D);
    }
    if (cfg_.attn == AttnStage::Transformer) {
        for (std::size_t b = 0; b < cfg_.blocks; ++b) {
            std::string p = "blk" + std::to_string(b) + ".";
            add(p + "wq", D * D);
            add(p + "bq", D);
            add(p + "wk", D * D);
            add(p + "bk", D);
            add(p + "wv", D * D);
            add(p + "bv", D);
            add(p + "wo", D * D);
            add(p + "bo", D);
            add(p + "ln1_g", D);
            add(p + "ln1_b", D);
            add(p + "ff_w1", F * D);
            add(p + "ff_b1", F);
            add(p + "ff_w2", D * F);
            add(p + "ff_b2", D);
            add(p + "ln2_g", D);
            add(p + "ln2_b", D);
        }
    }
    add("head_w", D);
    add("head_b", 1);
    params_.assign(off, 0.0);
}

std::size_t SeqModel::group_offset(const std::string& name) const {
    for (const auto& g : groups_)
        if (g.name == name) return g.offset;
    throw std::logic_error("no parameter group: " + name);
}

void SeqModel::init_params() {
    std::mt19937_64 rng(seed_);
    auto fill_normal = [&](const std::string& name, double stddev) {
        std::normal_distribution<double> dist(0.0, stddev);
        for (const auto& g : groups_)
            if (g.name == name)
                for (std::size_t i = 0; i < g.size; ++i) params_[g.offset + i] = dist(rng);
    };
    auto fill_const = [&](const std::string& name, double v) {
        for (const auto& g : groups_)
            if (g.name == name)
                for (std::size_t i = 0; i < g.size; ++i) params_[g.offset + i] = v;
    };
    const double D = static_cast<double>(cfg_.dim);
    if (cfg_.conv == ConvStage::Conv) {
        fill_normal("conv_w", 1.0 / std::sqrt(static_cast<double>(cfg_.kernel)));
        fill_normal("proj_w", 1.0 / std::sqrt(static_cast<double>(cfg_.conv_channels)));
    } else {
        fill_normal("lift_w", 1.0);
    }
    if (cfg_.attn == AttnStage::Transformer) {
        for (std::size_t b = 0; b < cfg_.blocks; ++b) {
            std::string p = "blk" + std::to_string(b) + ".";
            for (const char* w : {"wq", "wk", "wv", "wo"})
                fill_normal(p + w, 1.0 / std::sqrt(D));
            fill_normal(p + "ff_w1", 1.0 / std::sqrt(D));
            fill_normal(p + "ff_w2", 1.0 / std::sqrt(static_cast<double>(cfg_.ff)));
            fill_const(p + "ln1_g", 1.0);
            fill_const(p + "ln2_g", 1.0);
        }
    }
    if (!cfg_.zero_head) fill_normal("head_w", 1.0 / std::sqrt(D));
}

SeqModel::SeqModel(const ModelConfig& cfg, uint64_t seed) : cfg_(cfg), seed_(seed) {
    if (cfg_.dim % cfg_.heads != 0)
        throw std::runtime_error("model dim must be divisible by head count");
    if (cfg_.kernel % 2 == 0) throw std::runtime_error("conv kernel must be odd");
    build_layout();
    init_params();
}

// ---------------------------------------------------------------------------
// forward / backward

struct BlockCache {
    std::vector<double> q, k, v;          // L*D
    std::vector<double> att;              // H*L*L
    std::vector<double> ctx;              // L*D
    std::vector<double> r1;               // L*D (input + attention out)
    std::vector<double> ln1_mu, ln1_s;    // L
    std::vector<double> ln1_out;          // L*D
    std::vector<double> ff_z, ff_a;       // L*F
    std::vector<double> r2;               // L*D
    std::vector<double> ln2_mu, ln2_s;    // L
    std::vector<double> out;              // L*D
};

struct SeqModel::Cache {
    std::vector<double> x;                // L, masked + scaled input
    std::vector<double> conv_z, conv_a;   // L*C
    std::vector<double> h0;               // L*D
    std::vector<BlockCache> blocks;
    std::vector<double> pool;             // D
    double u = 0.0;
    double yhat = 0.0;
};

namespace {

// out = g * (x - mu)/s + b per position; returns mu and s = sqrt(var + eps).
void layer_norm(const double* x, std::size_t D, const double* g, const double* b,
                double* out, double* mu_out, double* s_out) {
    double mu = 0.0;
    for (std::size_t d = 0; d < D; ++d) mu += x[d];
    mu /= static_cast<double>(D);
    double var = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
        double c = x[d] - mu;
        var += c * c;
    }
    var /= static_cast<double>(D);
    double s = std::sqrt(var + kLnEps);
    for (std::size_t d = 0; d < D; ++d) out[d] = g[d] * (x[d] - mu) / s + b[d];
    *mu_out = mu;
    *s_out = s;
}

void layer_norm_backward(const double* x, std::size_t D, const double* g, double mu,
                         double s, const double* dy, double* dx, double* dg,
                         double* db) {
    double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
        double xhat = (x[d] - mu) / s;
        double dxhat = dy[d] * g[d];
        dg[d] += dy[d] * xhat;
        db[d] += dy[d];
        mean_dxhat += dxhat;
        mean_dxhat_xhat += dxhat * xhat;
    }
    mean_dxhat /= static_cast<double>(D);
    mean_dxhat_xhat /= static_cast<double>(D);
    for (std::size_t d = 0; d < D; ++d) {
        double xhat = (x[d] - mu) / s;
        double dxhat = dy[d] * g[d];
        dx[d] += (dxhat - mean_dxhat - xhat * mean_dxhat_xhat) / s;
    }
}

}  // namespace

double SeqModel::run(const FingerprintFeature& f, Cache* cache) const {
    const std::size_t L = cfg_.seq_len, C = cfg_.conv_channels, K = cfg_.kernel,
                      D = cfg_.dim, H = cfg_.heads, F = cfg_.ff;
    if (f.values.size() != L || f.mask.size() != L)
        throw std::runtime_error("feature length does not match model seq_len");
    const std::size_t dh = D / H;
    const double* P = params_.data();

    Cache local;
    Cache& c = cache ? *cache : local;
    c.x.assign(L, 0.0);
    std::size_t valid = 0;
    for (std::size_t p = 0; p < L; ++p) {
        c.x[p] = f.mask[p] ? f.values[p] * kInputScale : 0.0;
        valid += f.mask[p];
    }
    if (valid == 0) throw std::runtime_error("feature mask has no valid positions");

    // conv stage -> h0 [L*D]
    c.h0.assign(L * D, 0.0);
    if (cfg_.conv == ConvStage::Conv) {
        const double* cw = P + group_offset("conv_w");
        const double* cb = P + group_offset("conv_b");
        const double* pw = P + group_offset("proj_w");
        const double* pb = P + group_offset("proj_b");
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(K / 2);
        c.conv_z.assign(L * C, 0.0);
        c.conv_a.assign(L * C, 0.0);
        for (std::size_t p = 0; p < L; ++p) {
            for (std::size_t ch = 0; ch < C; ++ch) {
                double z = cb[ch];
                for (std::size_t j = 0; j < K; ++j) {
                    std::ptrdiff_t q = static_cast<std::ptrdiff_t>(p + j) - off;
                    if (q >= 0 && q < static_cast<std::ptrdiff_t>(L))
                        z += cw[ch * K + j] * c.x[static_cast<std::size_t>(q)];
                }
                c.conv_z[p * C + ch] = z;
                c.conv_a[p * C + ch] = z > 0.0 ? z : 0.0;
            }
            for (std::size_t d = 0; d < D; ++d) {
                double h = pb[d];
                for (std::size_t ch = 0; ch < C; ++ch)
                    h += pw[d * C + ch] * c.conv_a[p * C + ch];
                c.h0[p * D + d] = h;
            }
        }
    } else {
        const double* lw = P + group_offset("lift_w");
        const double* lb = P + group_offset("lift_b");
        for (std::size_t p = 0; p < L; ++p)
            for (std::size_t d = 0; d < D; ++d) c.h0[p * D + d] = lw[d] * c.x[p] + lb[d];
    }

    // transformer stage
    const std::vector<double>* hcur = &c.h0;
    c.blocks.clear();
    if (cfg_.attn == AttnStage::Transformer) {
        c.blocks.resize(cfg_.blocks);
        for (std::size_t b = 0; b < cfg_.blocks; ++b) {
            BlockCache& bc = c.blocks[b];
            std::string pre = "blk" + std::to_string(b) + ".";
            const double* wq = P + group_offset(pre + "wq");
            const double* bq = P + group_offset(pre + "bq");
            const double* wk = P + group_offset(pre + "wk");
            const double* bk = P + group_offset(pre + "bk");
            const double* wv = P + group_offset(pre + "wv");
            const double* bv = P + group_offset(pre + "bv");
            const double* wo = P + group_offset(pre + "wo");
            const double* bo = P + group_offset(pre + "bo");
            const double* g1 = P + group_offset(pre + "ln1_g");
            const double* b1 = P + group_offset(pre + "ln1_b");
            const double* w1 = P + group_offset(pre + "ff_w1");
            const double* fb1 = P + group_offset(pre + "ff_b1");
            const double* w2 = P + group_offset(pre + "ff_w2");
            const double* fb2 = P + group_offset(pre + "ff_b2");
            const double* g2 = P + group_offset(pre + "ln2_g");
            const double* b2 = P + group_offset(pre + "ln2_b");
            const std::vector<double>& hin = *hcur;

            bc.q.assign(L * D, 0.0);
            bc.k.assign(L * D, 0.0);
            bc.v.assign(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p) {
                for (std::size_t d = 0; d < D; ++d) {
                    double sq = bq[d], sk = bk[d], sv = bv[d];
                    for (std::size_t e = 0; e < D; ++e) {
                        double h = hin[p * D + e];
                        sq += wq[d * D + e] * h;
                        sk += wk[d * D + e] * h;
                        sv += wv[d * D + e] * h;
                    }
                    bc.q[p * D + d] = sq;
                    bc.k[p * D + d] = sk;
                    bc.v[p * D + d] = sv;
                }
            }

            bc.att.assign(H * L * L, 0.0);
            bc.ctx.assign(L * D, 0.0);
            const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
            std::vector<double> scores(L);
            for (std::size_t h = 0; h < H; ++h) {
                for (std::size_t p = 0; p < L; ++p) {
                    double max_s = -1e300;
                    for (std::size_t r = 0; r < L; ++r) {
                        if (!f.mask[r]) continue;
                        double s = 0.0;
                        for (std::size_t d = 0; d < dh; ++d)
                            s += bc.q[p * D + h * dh + d] * bc.k[r * D + h * dh + d];
                        s *= scale;
                        scores[r] = s;
                        max_s = std::max(max_s, s);
                    }
                    double denom = 0.0;
                    for (std::size_t r = 0; r < L; ++r) {
                        if (!f.mask[r]) continue;
                        double e = std::exp(scores[r] - max_s);
                        bc.att[(h * L + p) * L + r] = e;
                        denom += e;
                    }
                    for (std::size_t r = 0; r < L; ++r) {
                        if (!f.mask[r]) continue;
                        double a = bc.att[(h * L + p) * L + r] / denom;
                        bc.att[(h * L + p) * L + r] = a;
                        for (std::size_t d = 0; d < dh; ++d)
                            bc.ctx[p * D + h * dh + d] += a * bc.v[r * D + h * dh + d];
                    }
                }
            }

            bc.r1.assign(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p)
                for (std::size_t d = 0; d < D; ++d) {
                    double o = bo[d];
                    for (std::size_t e = 0; e < D; ++e)
                        o += wo[d * D + e] * bc.ctx[p * D + e];
                    bc.r1[p * D + d] = hin[p * D + d] + o;
                }

            bc.ln1_mu.assign(L, 0.0);
            bc.ln1_s.assign(L, 0.0);
            bc.ln1_out.assign(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p)
                layer_norm(&bc.r1[p * D], D, g1, b1, &bc.ln1_out[p * D], &bc.ln1_mu[p],
                           &bc.ln1_s[p]);

            bc.ff_z.assign(L * F, 0.0);
            bc.ff_a.assign(L * F, 0.0);
            bc.r2.assign(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p) {
                for (std::size_t t = 0; t < F; ++t) {
                    double z = fb1[t];
                    for (std::size_t d = 0; d < D; ++d)
                        z += w1[t * D + d] * bc.ln1_out[p * D + d];
                    bc.ff_z[p * F + t] = z;
                    bc.ff_a[p * F + t] = z > 0.0 ? z : 0.0;
                }
                for (std::size_t d = 0; d < D; ++d) {
                    double o = fb2[d];
                    for (std::size_t t = 0; t < F; ++t)
                        o += w2[d * F + t] * bc.ff_a[p * F + t];
                    bc.r2[p * D + d] = bc.ln1_out[p * D + d] + o;
                }
            }

            bc.ln2_mu.assign(L, 0.0);
            bc.ln2_s.assign(L, 0.0);
            bc.out.assign(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p)
                layer_norm(&bc.r2[p * D], D, g2, b2, &bc.out[p * D], &bc.ln2_mu[p],
                           &bc.ln2_s[p]);

            hcur = &bc.out;
        }
    }

    // mask-aware mean pool + head
    c.pool.assign(D, 0.0);
    for (std::size_t p = 0; p < L; ++p) {
        if (!f.mask[p]) continue;
        for (std::size_t d = 0; d < D; ++d) c.pool[d] += (*hcur)[p * D + d];
    }
    for (std::size_t d = 0; d < D; ++d) c.pool[d] /= static_cast<double>(valid);

    const double* hw = P + group_offset("head_w");
    const double* hb = P + group_offset("head_b");
    double u = hb[0];
    for (std::size_t d = 0; d < D; ++d) u += hw[d] * c.pool[d];
    c.u = u;
    c.yhat = sigmoid(u);
    return c.yhat;
}

double SeqModel::forward(const FingerprintFeature& f) const { return run(f, nullptr); }

void SeqModel::backward(const FingerprintFeature& f, const Cache& c, double dloss_du,
                        std::vector<double>& grad) const {
    const std::size_t L = cfg_.seq_len, C = cfg_.conv_channels, K = cfg_.kernel,
                      D = cfg_.dim, H = cfg_.heads, F = cfg_.ff;
    const std::size_t dh = D / H;
    const double* P = params_.data();
    double* G = grad.data();

    std::size_t valid = 0;
    for (std::size_t p = 0; p < L; ++p) valid += f.mask[p];

    // head
    const double* hw = P + group_offset("head_w");
    double* g_hw = G + group_offset("head_w");
    double* g_hb = G + group_offset("head_b");
    std::vector<double> d_pool(D, 0.0);
    for (std::size_t d = 0; d < D; ++d) {
        g_hw[d] += dloss_du * c.pool[d];
        d_pool[d] = dloss_du * hw[d];
    }
    g_hb[0] += dloss_du;

    // pool
    std::vector<double> d_h(L * D, 0.0);
    for (std::size_t p = 0; p < L; ++p) {
        if (!f.mask[p]) continue;
        for (std::size_t d = 0; d < D; ++d)
            d_h[p * D + d] = d_pool[d] / static_cast<double>(valid);
    }

    // transformer blocks in reverse
    if (cfg_.attn == AttnStage::Transformer) {
        for (std::size_t b = cfg_.blocks; b-- > 0;) {
            const BlockCache& bc = c.blocks[b];
            const std::vector<double>& hin = b == 0 ? c.h0 : c.blocks[b - 1].out;
            std::string pre = "blk" + std::to_string(b) + ".";
            const double* wq = P + group_offset(pre + "wq");
            const double* wk = P + group_offset(pre + "wk");
            const double* wv = P + group_offset(pre + "wv");
            const double* wo = P + group_offset(pre + "wo");
            const double* g1 = P + group_offset(pre + "ln1_g");
            const double* w1 = P + group_offset(pre + "ff_w1");
            const double* w2 = P + group_offset(pre + "ff_w2");
            const double* g2 = P + group_offset(pre + "ln2_g");
            double* g_wq = G + group_offset(pre + "wq");
            double* g_bq = G + group_offset(pre + "bq");
            double* g_wk = G + group_offset(pre + "wk");
            double* g_bk = G + group_offset(pre + "bk");
            double* g_wv = G + group_offset(pre + "wv");
            double* g_bv = G + group_offset(pre + "bv");
            double* g_wo = G + group_offset(pre + "wo");
            double* g_bo = G + group_offset(pre + "bo");
            double* g_g1 = G + group_offset(pre + "ln1_g");
            double* g_b1 = G + group_offset(pre + "ln1_b");
            double* g_w1 = G + group_offset(pre + "ff_w1");
            double* g_fb1 = G + group_offset(pre + "ff_b1");
            double* g_w2 = G + group_offset(pre + "ff_w2");
            double* g_fb2 = G + group_offset(pre + "ff_b2");
            double* g_g2 = G + group_offset(pre + "ln2_g");
            double* g_b2 = G + group_offset(pre + "ln2_b");

            // LN2: d_h -> d_r2
            std::vector<double> d_r2(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p)
                layer_norm_backward(&bc.r2[p * D], D, g2, bc.ln2_mu[p], bc.ln2_s[p],
                                    &d_h[p * D], &d_r2[p * D], g_g2, g_b2);

            // FF + residual: d_r2 -> d_ln1out
            std::vector<double> d_ln1out = d_r2;  // residual path
            for (std::size_t p = 0; p < L; ++p) {
                std::vector<double> d_a(F, 0.0);
                for (std::size_t d = 0; d < D; ++d) {
                    double go = d_r2[p * D + d];
                    g_fb2[d] += go;
                    for (std::size_t t = 0; t < F; ++t) {
                        g_w2[d * F + t] += go * bc.ff_a[p * F + t];
                        d_a[t] += go * w2[d * F + t];
                    }
                }
                for (std::size_t t = 0; t < F; ++t) {
                    if (bc.ff_z[p * F + t] <= 0.0) continue;
                    double dz = d_a[t];
                    g_fb1[t] += dz;
                    for (std::size_t d = 0; d < D; ++d) {
                        g_w1[t * D + d] += dz * bc.ln1_out[p * D + d];
                        d_ln1out[p * D + d] += dz * w1[t * D + d];
                    }
                }
            }

            // LN1: d_ln1out -> d_r1
            std::vector<double> d_r1(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p)
                layer_norm_backward(&bc.r1[p * D], D, g1, bc.ln1_mu[p], bc.ln1_s[p],
                                    &d_ln1out[p * D], &d_r1[p * D], g_g1, g_b1);

            // attention output projection: d_r1 -> d_ctx (+ residual to hin)
            std::vector<double> d_hin = d_r1;  // residual path
            std::vector<double> d_ctx(L * D, 0.0);
            for (std::size_t p = 0; p < L; ++p)
                for (std::size_t d = 0; d < D; ++d) {
                    double go = d_r1[p * D + d];
                    g_bo[d] += go;
                    for (std::size_t e = 0; e < D; ++e) {
                        g_wo[d * D + e] += go * bc.ctx[p * D + e];
                        d_ctx[p * D + e] += go * wo[d * D + e];
                    }
                }

            // attention core
            std::vector<double> d_q(L * D, 0.0), d_k(L * D, 0.0), d_v(L * D, 0.0);
            const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
            std::vector<double> d_att(L), d_s(L);
            for (std::size_t h = 0; h < H; ++h) {
                for (std::size_t p = 0; p < L; ++p) {
                    double dot = 0.0;
                    for (std::size_t r = 0; r < L; ++r) {
                        if (!f.mask[r]) {
                            d_att[r] = 0.0;
                            continue;
                        }
                        double da = 0.0;
                        for (std::size_t d = 0; d < dh; ++d)
                            da += d_ctx[p * D + h * dh + d] * bc.v[r * D + h * dh + d];
                        d_att[r] = da;
                        dot += bc.att[(h * L + p) * L + r] * da;
                    }
                    for (std::size_t r = 0; r < L; ++r) {
                        if (!f.mask[r]) continue;
                        double a = bc.att[(h * L + p) * L + r];
                        double ds = a * (d_att[r] - dot);
                        for (std::size_t d = 0; d < dh; ++d) {
                            d_q[p * D + h * dh + d] +=
                                ds * scale * bc.k[r * D + h * dh + d];
                            d_k[r * D + h * dh + d] +=
                                ds * scale * bc.q[p * D + h * dh + d];
                            d_v[r * D + h * dh + d] +=
                                a * d_ctx[p * D + h * dh + d];
                        }
                    }
                }
            }

            // q/k/v projections -> d_hin
            for (std::size_t p = 0; p < L; ++p)
                for (std::size_t d = 0; d < D; ++d) {
                    double dq = d_q[p * D + d], dk = d_k[p * D + d], dv = d_v[p * D + d];
                    g_bq[d] += dq;
                    g_bk[d] += dk;
                    g_bv[d] += dv;
                    for (std::size_t e = 0; e < D; ++e) {
                        double h = hin[p * D + e];
                        g_wq[d * D + e] += dq * h;
                        g_wk[d * D + e] += dk * h;
                        g_wv[d * D + e] += dv * h;
                        d_hin[p * D + e] +=
                            dq * wq[d * D + e] + dk * wk[d * D + e] + dv * wv[d * D + e];
                    }
                }

            d_h = std::move(d_hin);
        }
    }

    // conv stage
    if (cfg_.conv == ConvStage::Conv) {
        const double* pw = P + group_offset("proj_w");
        double* g_cw = G + group_offset("conv_w");
        double* g_cb = G + group_offset("conv_b");
        double* g_pw = G + group_offset("proj_w");
        double* g_pb = G + group_offset("proj_b");
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(K / 2);
        for (std::size_t p = 0; p < L; ++p) {
            std::vector<double> d_conv_a(C, 0.0);
            for (std::size_t d = 0; d < D; ++d) {
                double go = d_h[p * D + d];
                g_pb[d] += go;
                for (std::size_t ch = 0; ch < C; ++ch) {
                    g_pw[d * C + ch] += go * c.conv_a[p * C + ch];
                    d_conv_a[ch] += go * pw[d * C + ch];
                }
            }
            for (std::size_t ch = 0; ch < C; ++ch) {
                if (c.conv_z[p * C + ch] <= 0.0) continue;
                double dz = d_conv_a[ch];
                g_cb[ch] += dz;
                for (std::size_t j = 0; j < K; ++j) {
                    std::ptrdiff_t q = static_cast<std::ptrdiff_t>(p + j) - off;
                    if (q >= 0 && q < static_cast<std::ptrdiff_t>(L))
                        g_cw[ch * K + j] += dz * c.x[static_cast<std::size_t>(q)];
                }
            }
        }
    } else {
        double* g_lw = G + group_offset("lift_w");
        double* g_lb = G + group_offset("lift_b");
        for (std::size_t p = 0; p < L; ++p)
            for (std::size_t d = 0; d < D; ++d) {
                g_lw[d] += d_h[p * D + d] * c.x[p];
                g_lb[d] += d_h[p * D + d];
            }
    }
}

double SeqModel::forward_backward(const FingerprintFeature& f, int label,
                                  std::vector<double>& grad) const {
    if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
    Cache cache;
    double yhat = run(f, &cache);
    double p = std::clamp(yhat, 1e-7, 1.0 - 1e-7);
    double y = static_cast<double>(label);
    double loss = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    backward(f, cache, yhat - y, grad);
    return loss;
}

std::vector<double> SeqModel::train(const std::vector<FingerprintFeature>& features,
                                    const std::vector<int>& labels,
                                    const TrainConfig& tc) {
    if (features.size() != labels.size())
        throw std::runtime_error("features/labels length mismatch");
    if (features.empty()) throw std::runtime_error("empty training set");
    bool has0 = false, has1 = false;
    for (int y : labels) (y ? has1 : has0) = true;
    if (!has0 || !has1)
        throw std::runtime_error("training set must contain both labels");
    if (!(tc.lr > 0.0)) throw std::runtime_error("learning rate must be > 0");
    if (!(tc.warmup_ratio >= 0.0 && tc.warmup_ratio < 1.0))
        throw std::runtime_error("warmup ratio must be in [0,1)");

    const std::size_t n = features.size();
    const std::size_t batch = std::max<std::size_t>(1, tc.batch_size);
    const std::size_t steps_per_epoch = (n + batch - 1) / batch;
    const std::size_t total_steps = steps_per_epoch * tc.epochs;
    const double warmup_steps =
        std::max(1.0, tc.warmup_ratio * static_cast<double>(total_steps));

    // Decoupled weight decay skips biases and layer-norm parameters.
    std::vector<char> decay(params_.size(), 1);
    for (const auto& g : groups_) {
        std::string leaf = g.name.substr(g.name.find('.') + 1);
        bool skip = g.name.find("ln") != std::string::npos ||
                    (!leaf.empty() && leaf[0] == 'b') ||
                    g.name.find("_b") != std::string::npos;
        if (skip)
            for (std::size_t i = 0; i < g.size; ++i) decay[g.offset + i] = 0;
    }

    std::vector<double> m(params_.size(), 0.0), v(params_.size(), 0.0);
    const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    std::mt19937_64 rng(tc.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::vector<double> epoch_losses;
    std::vector<double> grad(params_.size(), 0.0);
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            std::size_t stop = std::min(n, start + batch);
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t i = start; i < stop; ++i)
                batch_loss += forward_backward(features[order[i]], labels[order[i]], grad);
            double inv = 1.0 / static_cast<double>(stop - start);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("non-finite training loss at step " +
                                         std::to_string(t));
            epoch_loss += batch_loss;

            ++t;
            double lr_t =
                tc.lr * std::min(1.0, static_cast<double>(t) / warmup_steps);
            double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
            double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
            for (std::size_t i = 0; i < params_.size(); ++i) {
                double g = grad[i] * inv;
                m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                double update = (m[i] / bc1) / (std::sqrt(v[i] / bc2) + adam_eps);
                params_[i] -= lr_t * update;
                if (decay[i]) params_[i] -= lr_t * tc.weight_decay * params_[i];
            }
        }
        epoch_losses.push_back(epoch_loss / static_cast<double>(n));
    }
    return epoch_losses;
}

std::vector<int> SeqModel::predict(const std::vector<FingerprintFeature>& features,
                                   std::vector<double>* probs_out) const {
    std::vector<int> labels;
    labels.reserve(features.size());
    if (probs_out) probs_out->clear();
    for (const auto& f : features) {
        double p = forward(f);
        if (probs_out) probs_out->push_back(p);
        labels.push_back(p >= 0.5 ? 1 : 0);  // exactly 0.5 counts as fake
    }
    return labels;
}

double SeqModel::grad_check(const FingerprintFeature& f, int label,
                            double epsilon) const {
    std::vector<double> analytic(params_.size(), 0.0);
    forward_backward(f, label, analytic);

    SeqModel probe = *this;
    std::vector<double> numeric(params_.size(), 0.0);
    auto loss_at = [&](void) {
        double yhat = probe.forward(f);
        double p = std::clamp(yhat, 1e-7, 1.0 - 1e-7);
        double y = static_cast<double>(label);
        return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    };
    for (std::size_t i = 0; i < params_.size(); ++i) {
        double orig = probe.params_[i];
        probe.params_[i] = orig + epsilon;
        double lp = loss_at();
        probe.params_[i] = orig - epsilon;
        double lm = loss_at();
        probe.params_[i] = orig;
        numeric[i] = (lp - lm) / (2.0 * epsilon);
    }

    double worst = 0.0;
    for (const auto& g : groups_) {
        double na = 0.0, nn = 0.0, nd = 0.0;
        for (std::size_t i = g.offset; i < g.offset + g.size; ++i) {
            na += analytic[i] * analytic[i];
            nn += numeric[i] * numeric[i];
            double d = analytic[i] - numeric[i];
            nd += d * d;
        }
        // Floor the denominator so groups whose true gradient is essentially
        // zero don't register as spurious relative error: the central
        // difference there is pure cancellation noise, ~ulp(loss)/epsilon
        // (about 1e-11 per parameter at epsilon = 1e-5), so the floor must sit
        // well above that noise while staying far below any gradient that
        // could influence training.
        double denom = std::max(std::sqrt(na) + std::sqrt(nn), 1e-6);
        double err = std::sqrt(nd) / denom;
        worst = std::max(worst, err);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// checkpoint

namespace {
constexpr int kCheckpointVersion = 1;
}

void SeqModel::save(const std::string& path) const {
    json j;
    j["version"] = kCheckpointVersion;
    j["config"] = {
        {"seq_len", cfg_.seq_len},
        {"conv_channels", cfg_.conv_channels},
        {"kernel", cfg_.kernel},
        {"dim", cfg_.dim},
        {"heads", cfg_.heads},
        {"ff", cfg_.ff},
        {"blocks", cfg_.blocks},
        {"conv", cfg_.conv == ConvStage::Conv ? "conv" : "identity"},
        {"attn", cfg_.attn == AttnStage::Transformer ? "transformer" : "identity"},
        {"zero_head", cfg_.zero_head},
    };
    j["seed"] = seed_;
    j["params"] = params_;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump(2) << "\n";
}

SeqModel SeqModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("checkpoint is not valid JSON");
    if (!j.contains("version") || j["version"].get<int>() != kCheckpointVersion)
        throw std::runtime_error("checkpoint version mismatch (expected " +
                                 std::to_string(kCheckpointVersion) + ")");
    const auto& jc = j["config"];
    ModelConfig cfg;
    cfg.seq_len = jc["seq_len"].get<std::size_t>();
    cfg.conv_channels = jc["conv_channels"].get<std::size_t>();
    cfg.kernel = jc["kernel"].get<std::size_t>();
    cfg.dim = jc["dim"].get<std::size_t>();
    cfg.heads = jc["heads"].get<std::size_t>();
    cfg.ff = jc["ff"].get<std::size_t>();
    cfg.blocks = jc["blocks"].get<std::size_t>();
    cfg.conv = jc["conv"].get<std::string>() == "conv" ? ConvStage::Conv
                                                       : ConvStage::Identity;
    cfg.attn = jc["attn"].get<std::string>() == "transformer" ? AttnStage::Transformer
                                                              : AttnStage::Identity;
    cfg.zero_head = jc["zero_head"].get<bool>();
    SeqModel model(cfg, j["seed"].get<uint64_t>());
    std::vector<double> params = j["params"].get<std::vector<double>>();
    if (params.size() != model.params_.size())
        throw std::runtime_error("checkpoint parameter count mismatch");
    model.params_ = std::move(params);
    return model;
}

}  // namespace life
