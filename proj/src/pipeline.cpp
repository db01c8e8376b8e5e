#include "life/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "life/synth.hpp"
#include "life/textproc.hpp"

namespace life {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::thread> threads;
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                    fn(i);
            } catch (const std::exception& e) {
                errors[w] = e.what();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error(e);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    out << content;
}

json report_to_json(const EvalReport& r) {
    return json{{"accuracy", r.accuracy}, {"precision", r.precision},
                {"recall", r.recall},     {"f1", r.f1},
                {"tp", r.tp},             {"fp", r.fp},
                {"fn", r.fn},             {"tn", r.tn},
                {"prompt", r.prompt},     {"k", r.k},
                {"variant", r.variant},   {"seed", r.seed},
                {"config_fingerprint", r.config_fingerprint}};
}

void persist_report(const PipelineConfig& cfg, const EvalReport& r) {
    fs::path path = fs::path(cfg.out_dir) / "reports" /
                    ("report_" + r.variant + "_" + r.prompt + "_k" +
                     std::to_string(r.k) + ".json");
    write_file(path, report_to_json(r).dump(2) + "\n");
}

void write_run_meta(const PipelineConfig& cfg, const std::string& command) {
    json j;
    j["command"] = command;
    j["timestamp"] = static_cast<long long>(std::time(nullptr));
    j["fingerprint"] = config_fingerprint(cfg, command);
    write_file(fs::path(cfg.out_dir) / "run_meta.json", j.dump(2) + "\n");
}

struct LoadedData {
    std::vector<NewsArticle> articles;
    DatasetSplit split;
    std::unordered_map<std::string, const NewsArticle*> by_id;
};

LoadedData load_and_split(const PipelineConfig& cfg) {
    LoadedData d;
    d.articles = load_dataset(cfg.dataset_path);
    if (d.articles.empty()) throw std::runtime_error("dataset is empty");
    d.split = split_dataset(d.articles, cfg.split_ratio, stage_seed(cfg, "split"));
    for (const auto& a : d.articles) d.by_id[a.id] = &a;
    return d;
}

std::vector<const NewsArticle*> resolve_ids(const LoadedData& d,
                                            const std::vector<std::string>& ids) {
    std::vector<const NewsArticle*> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(d.by_id.at(id));
    return out;
}

}  // namespace

std::unique_ptr<ScorerBackend> make_scorer(const PipelineConfig& cfg,
                                           const std::vector<NewsArticle>& articles,
                                           const std::vector<std::string>& train_ids) {
    if (cfg.scorer_backend == BackendKind::Http)
        return std::make_unique<HttpScorer>(cfg.scorer_http);

    std::unordered_set<std::string> train(train_ids.begin(), train_ids.end());
    std::vector<std::vector<std::string>> fake_sentences, all_sentences;
    for (const auto& a : articles) {
        if (!train.count(a.id)) continue;
        for (const auto& span : split_sentences(a.text)) {
            all_sentences.push_back(span.words);
            if (a.label == Label::Fake) fake_sentences.push_back(span.words);
        }
        auto title_words = tokenize_words(a.title);
        if (!title_words.empty()) {
            all_sentences.push_back(title_words);
            if (a.label == Label::Fake) fake_sentences.push_back(title_words);
        }
    }
    if (fake_sentences.empty())
        throw std::runtime_error("training split has no fake articles to fit on");
    NgramModel fake_fit = NgramModel::fit(fake_sentences, cfg.ngram_order, cfg.ngram_alpha);
    NgramModel all_fit = NgramModel::fit(all_sentences, cfg.ngram_order, cfg.ngram_alpha);
    return std::make_unique<NgramScorer>(std::move(fake_fit), std::move(all_fit));
}

std::unique_ptr<AnchorClassifier> make_anchor(const PipelineConfig& cfg,
                                              const std::vector<NewsArticle>& articles,
                                              const std::vector<std::string>& train_ids) {
    if (cfg.anchor_backend == BackendKind::Http)
        return std::make_unique<HttpClassifier>(cfg.anchor_http);
    std::unordered_set<std::string> train(train_ids.begin(), train_ids.end());
    std::vector<NewsArticle> subset;
    for (const auto& a : articles)
        if (train.count(a.id)) subset.push_back(a);
    return std::make_unique<HashedLinearClassifier>(
        HashedLinearClassifier::fit(subset, cfg.anchor_fit));
}

std::vector<WordProbSeq> score_article_sentences(
    const ScorerBackend& scorer, PromptId prompt_id, const NewsArticle& article,
    const std::vector<SentenceSpan>& spans, const std::vector<std::size_t>& indices) {
    const PromptTemplate& tmpl = prompt_template(prompt_id);
    std::vector<WordProbSeq> seqs;
    seqs.reserve(indices.size());
    for (std::size_t idx : indices) {
        const SentenceSpan& span = spans.at(idx);
        std::string preceding = article.title;
        if (span.char_start > 0) {
            if (!preceding.empty()) preceding += "\n";
            preceding += article.text.substr(0, span.char_start);
        }
        RenderedPrompt prompt = render_prompt(tmpl, article, preceding);
        seqs.push_back(scorer.score_sentence(prompt, preceding, span));
    }
    return seqs;
}

namespace {

struct ArticleFeatures {
    FragmentSelection selection;
    FingerprintFeature feature;
};

// Fragment selection + scoring + feature assembly for a set of articles.
std::vector<ArticleFeatures> build_features(const PipelineConfig& cfg,
                                            AblationVariant variant,
                                            const ScorerBackend& scorer,
                                            const AnchorClassifier& anchor,
                                            const std::vector<const NewsArticle*>& arts,
                                            PromptId prompt_id) {
    std::vector<ArticleFeatures> out(arts.size());
    bool select_all = variant == AblationVariant::NoKF || cfg.k == 0;
    parallel_for(arts.size(), cfg.jobs, [&](std::size_t i) {
        const NewsArticle& a = *arts[i];
        auto spans = split_sentences(a.text);
        if (spans.empty()) throw std::runtime_error("article has no sentences: " + a.id);
        FragmentSelection sel;
        if (select_all) {
            sel.article_id = a.id;
            sel.k = static_cast<int>(spans.size());
            sel.anchor_prob = 0.0;
            for (std::size_t s = 0; s < spans.size(); ++s) sel.selected.emplace_back(s, 0.0);
        } else {
            MaskedScores ms = masked_scores(anchor, a, spans);
            sel = select_topk(a.id, ms.anchor, ms.masked, cfg.k, cfg.delta_mode);
        }
        std::vector<std::size_t> indices;
        for (const auto& [idx, delta] : sel.selected) indices.push_back(idx);
        auto seqs = score_article_sentences(scorer, prompt_id, a, spans, indices);
        out[i].feature = assemble_feature(a.id, seqs, cfg.model.seq_len);
        out[i].feature.k = sel.k;
        out[i].selection = std::move(sel);
    });
    return out;
}

}  // namespace

PipelineOutcome run_pipeline(const PipelineConfig& cfg, AblationVariant variant) {
    LoadedData data = load_and_split(cfg);
    PromptId prompt_id =
        variant == AblationVariant::NoMP ? PromptId::Neutral : cfg.prompt_id;

    auto anchor = make_anchor(cfg, data.articles, data.split.train);
    auto scorer = make_scorer(cfg, data.articles, data.split.train);

    auto train_arts = resolve_ids(data, data.split.train);
    auto test_arts = resolve_ids(data, data.split.test);
    auto train_feats = build_features(cfg, variant, *scorer, *anchor, train_arts, prompt_id);
    auto test_feats = build_features(cfg, variant, *scorer, *anchor, test_arts, prompt_id);

    ModelConfig mc = cfg.model;
    if (variant == AblationVariant::NoCNN) mc.conv = ConvStage::Identity;
    if (variant == AblationVariant::NoTRM) mc.attn = AttnStage::Identity;

    std::vector<FingerprintFeature> X;
    std::vector<int> y;
    for (std::size_t i = 0; i < train_feats.size(); ++i) {
        X.push_back(train_feats[i].feature);
        y.push_back(train_arts[i]->label == Label::Fake ? 1 : 0);
    }
    TrainConfig tc = cfg.train;
    tc.seed = stage_seed(cfg, "train");
    SeqModel model(mc, stage_seed(cfg, "model_init"));
    PipelineOutcome out;
    out.loss_curve = model.train(X, y, tc);

    std::vector<FingerprintFeature> Xt;
    for (const auto& f : test_feats) Xt.push_back(f.feature);
    out.test_preds = model.predict(Xt, &out.test_probs);
    for (const auto* a : test_arts) {
        out.test_ids.push_back(a->id);
        out.test_labels.push_back(a->label == Label::Fake ? 1 : 0);
    }

    out.report = compute_metrics(out.test_preds, out.test_labels);
    out.report.prompt = prompt_id_name(prompt_id);
    out.report.k = variant == AblationVariant::NoKF ? 0 : cfg.k;
    out.report.variant = variant_name(variant);
    out.report.seed = cfg.seed;
    out.report.config_fingerprint = config_fingerprint(cfg, variant_name(variant));
    out.model = std::move(model);
    return out;
}

int cmd_validate(const PipelineConfig& cfg, bool probe,
                 std::vector<std::string>* diags_out) {
    auto diags = validate_config(cfg, probe);
    if (diags_out) *diags_out = diags;
    for (const auto& d : diags) std::cerr << "config: " << d << "\n";
    return diags.empty() ? 0 : 1;
}

DivergenceSummary cmd_divergence(const PipelineConfig& cfg) {
    LoadedData data = load_and_split(cfg);
    auto scorer = make_scorer(cfg, data.articles, data.split.train);
    auto pairs = pair_by_length(data.articles);
    if (pairs.empty()) throw std::runtime_error("dataset yields no real/fake pairs");

    struct PairRow {
        std::string real_id, fake_id;
        double d = 0.0;
        double p = 1.0;
    };
    std::vector<PairRow> rows(pairs.size());
    std::vector<double> real_scores(pairs.size()), fake_scores(pairs.size());

    parallel_for(pairs.size(), cfg.jobs, [&](std::size_t i) {
        const NewsArticle& real = *data.by_id.at(pairs[i].first);
        const NewsArticle& fake = *data.by_id.at(pairs[i].second);
        auto score_all = [&](const NewsArticle& a) {
            auto spans = split_sentences(a.text);
            std::vector<std::size_t> idx(spans.size());
            std::iota(idx.begin(), idx.end(), 0);
            return score_article_sentences(*scorer, cfg.prompt_id, a, spans, idx);
        };
        auto real_seqs = score_all(real);
        auto fake_seqs = score_all(fake);
        ArticleScore rs = mean_neg_log_prob(real.id, real_seqs);
        ArticleScore fs = mean_neg_log_prob(fake.id, fake_seqs);
        real_scores[i] = rs.mean_neg_log_prob;
        fake_scores[i] = fs.mean_neg_log_prob;

        // Per-pair test over positionally aligned word-level -log p samples,
        // truncated to the shorter article.
        std::vector<double> real_words, fake_words;
        for (const auto& s : real_seqs)
            for (const auto& w : s.words) real_words.push_back(-w.logprob);
        for (const auto& s : fake_seqs)
            for (const auto& w : s.words) fake_words.push_back(-w.logprob);
        std::size_t n = std::min(real_words.size(), fake_words.size());
        std::vector<double> diffs(n);
        for (std::size_t j = 0; j < n; ++j) diffs[j] = real_words[j] - fake_words[j];
        PairRow row;
        row.real_id = real.id;
        row.fake_id = fake.id;
        row.d = pair_difference(rs, fs).d;
        bool all_zero = std::all_of(diffs.begin(), diffs.end(),
                                    [](double v) { return v == 0.0; });
        row.p = all_zero ? 1.0 : wilcoxon_signed_rank(diffs).p_value;
        rows[i] = std::move(row);
    });

    const double alpha = 0.05;
    DivergenceSummary summary;
    summary.pairs = rows.size();
    summary.alpha = alpha;
    std::ostringstream pairs_csv;
    pairs_csv << "pair_id,d,p_value,significant\n";
    for (const auto& r : rows) {
        bool sig = r.p < alpha;
        summary.significant += sig;
        pairs_csv << r.real_id << ":" << r.fake_id << "," << format_double(r.d) << ","
                  << format_double(r.p) << "," << (sig ? 1 : 0) << "\n";
    }
    summary.ratio = static_cast<double>(summary.significant) /
                    static_cast<double>(summary.pairs);

    std::ostringstream hist_csv;
    hist_csv << "bin_lo,bin_hi,count_real,count_fake\n";
    for (const auto& row : histogram_rows(real_scores, fake_scores, cfg.histogram_bins))
        hist_csv << format_double(row.bin_lo) << "," << format_double(row.bin_hi) << ","
                 << row.count_real << "," << row.count_fake << "\n";

    std::ostringstream box_csv;
    box_csv << "label,min,q1,median,q3,max,outlier_count\n";
    for (const auto& b : {boxplot_summary("real", real_scores),
                          boxplot_summary("fake", fake_scores)})
        box_csv << b.label << "," << format_double(b.min) << "," << format_double(b.q1)
                << "," << format_double(b.median) << "," << format_double(b.q3) << ","
                << format_double(b.max) << "," << b.outlier_count << "\n";

    fs::path out(cfg.out_dir);
    write_file(out / "pairs.csv", pairs_csv.str());
    write_file(out / "histogram.csv", hist_csv.str());
    write_file(out / "boxplot.csv", box_csv.str());
    json j{{"pairs", summary.pairs},
           {"significant", summary.significant},
           {"insignificant", summary.pairs - summary.significant},
           {"ratio", summary.ratio},
           {"alpha", summary.alpha},
           {"prompt", prompt_id_name(cfg.prompt_id)}};
    write_file(out / "divergence.json", j.dump(2) + "\n");
    write_run_meta(cfg, "divergence");
    return summary;
}

EvalReport cmd_train(const PipelineConfig& cfg) {
    PipelineOutcome outcome = run_pipeline(cfg, AblationVariant::Full);
    fs::path out(cfg.out_dir);
    fs::create_directories(out);
    outcome.model->save((out / "checkpoint.json").string());

    std::ostringstream loss_csv;
    loss_csv << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < outcome.loss_curve.size(); ++e)
        loss_csv << e << "," << format_double(outcome.loss_curve[e]) << "\n";
    write_file(out / "loss_curve.csv", loss_csv.str());

    std::ostringstream preds_csv;
    preds_csv << "id,label,pred,prob\n";
    for (std::size_t i = 0; i < outcome.test_ids.size(); ++i)
        preds_csv << outcome.test_ids[i] << "," << outcome.test_labels[i] << ","
                  << outcome.test_preds[i] << "," << format_double(outcome.test_probs[i])
                  << "\n";
    write_file(out / "test_predictions.csv", preds_csv.str());

    persist_report(cfg, outcome.report);
    write_run_meta(cfg, "train");
    return outcome.report;
}

std::vector<EvalReport> cmd_ablate(const PipelineConfig& cfg,
                                   const std::vector<AblationVariant>& variants) {
    std::vector<EvalReport> reports;
    for (AblationVariant v : variants) {
        PipelineOutcome outcome = run_pipeline(cfg, v);
        persist_report(cfg, outcome.report);
        reports.push_back(outcome.report);
    }
    std::ostringstream csv;
    csv << "variant,accuracy,precision,recall,f1\n";
    for (const auto& r : reports)
        csv << r.variant << "," << format_double(r.accuracy) << ","
            << format_double(r.precision) << "," << format_double(r.recall) << ","
            << format_double(r.f1) << "\n";
    write_file(fs::path(cfg.out_dir) / "ablation.csv", csv.str());
    write_run_meta(cfg, "ablate");
    return reports;
}

std::vector<std::pair<int, EvalReport>> cmd_sweep_k(const PipelineConfig& cfg,
                                                    const std::vector<int>& k_values) {
    if (k_values.empty()) throw std::runtime_error("no k values given");
    std::vector<std::pair<int, EvalReport>> results;
    for (int k : k_values) {
        if (k < 0) throw std::runtime_error("k must be >= 0");
        PipelineConfig run_cfg = cfg;
        run_cfg.k = k;
        AblationVariant v = k == 0 ? AblationVariant::NoKF : AblationVariant::Full;
        PipelineOutcome outcome = run_pipeline(run_cfg, v);
        persist_report(run_cfg, outcome.report);
        results.emplace_back(k, outcome.report);
    }
    std::ostringstream csv;
    csv << "k,accuracy,precision,recall,f1\n";
    for (const auto& [k, r] : results)
        csv << k << "," << format_double(r.accuracy) << "," << format_double(r.precision)
            << "," << format_double(r.recall) << "," << format_double(r.f1) << "\n";
    write_file(fs::path(cfg.out_dir) / "sweep_k.csv", csv.str());
    write_run_meta(cfg, "sweep-k");
    return results;
}

PromptComparison cmd_prompts(const PipelineConfig& cfg,
                             const std::vector<PromptId>& prompts) {
    if (prompts.empty()) throw std::runtime_error("no prompt templates given");
    PromptComparison cmp;
    double lo = 1.0, hi = 0.0;
    for (PromptId p : prompts) {
        PipelineConfig run_cfg = cfg;
        run_cfg.prompt_id = p;
        PipelineOutcome outcome = run_pipeline(run_cfg, AblationVariant::Full);
        persist_report(run_cfg, outcome.report);
        lo = std::min(lo, outcome.report.accuracy);
        hi = std::max(hi, outcome.report.accuracy);
        cmp.reports.push_back(outcome.report);
    }
    cmp.max_accuracy_gap = hi - lo;
    std::ostringstream csv;
    csv << "prompt,accuracy,precision,recall,f1\n";
    for (const auto& r : cmp.reports)
        csv << r.prompt << "," << format_double(r.accuracy) << ","
            << format_double(r.precision) << "," << format_double(r.recall) << ","
            << format_double(r.f1) << "\n";
    write_file(fs::path(cfg.out_dir) / "prompts.csv", csv.str());
    write_run_meta(cfg, "prompts");
    return cmp;
}

WordFrequencyResult cmd_wordfreq(const PipelineConfig& cfg) {
    LoadedData data = load_and_split(cfg);
    auto anchor = make_anchor(cfg, data.articles, data.split.train);
    std::vector<const NewsArticle*> arts;
    for (const auto& a : data.articles) arts.push_back(&a);

    std::vector<FragmentSelection> selections(arts.size());
    parallel_for(arts.size(), cfg.jobs, [&](std::size_t i) {
        const NewsArticle& a = *arts[i];
        auto spans = split_sentences(a.text);
        if (cfg.k == 0) {
            FragmentSelection sel;
            sel.article_id = a.id;
            sel.k = static_cast<int>(spans.size());
            for (std::size_t s = 0; s < spans.size(); ++s) sel.selected.emplace_back(s, 0.0);
            selections[i] = std::move(sel);
        } else {
            MaskedScores ms = masked_scores(*anchor, a, spans);
            selections[i] = select_topk(a.id, ms.anchor, ms.masked, cfg.k, cfg.delta_mode);
        }
    });

    WordFrequencyResult result =
        word_frequency(selections, data.articles, stopword_list(), cfg.wordfreq_top_n);
    auto write_counts = [&](const std::string& name, const std::vector<WordCount>& rows) {
        std::ostringstream csv;
        csv << "word,count\n";
        for (const auto& r : rows) csv << r.word << "," << r.count << "\n";
        write_file(fs::path(cfg.out_dir) / name, csv.str());
    };
    write_counts("wordfreq_real.csv", result.real);
    write_counts("wordfreq_fake.csv", result.fake);
    write_run_meta(cfg, "wordfreq");
    return result;
}

CaseStudyResult cmd_case(const PipelineConfig& cfg, const std::string& pair_id) {
    LoadedData data = load_and_split(cfg);
    auto anchor = make_anchor(cfg, data.articles, data.split.train);
    auto scorer = make_scorer(cfg, data.articles, data.split.train);

    // Resolve the study pair: explicit pair_id field match, else the first
    // length-matched pair.
    const NewsArticle* real = nullptr;
    const NewsArticle* fake = nullptr;
    if (!pair_id.empty()) {
        for (const auto& a : data.articles) {
            if (a.pair_id && *a.pair_id == pair_id)
                (a.label == Label::Real ? real : fake) = &a;
        }
        if (!real || !fake)
            throw std::runtime_error("pair_id not found or incomplete: " + pair_id);
    } else {
        auto pairs = pair_by_length(data.articles);
        if (pairs.empty()) throw std::runtime_error("dataset yields no pairs");
        real = data.by_id.at(pairs.front().first);
        fake = data.by_id.at(pairs.front().second);
    }

    struct Side {
        const NewsArticle* article;
        std::vector<SentenceSpan> spans;
        FragmentSelection sel;
        std::vector<WordProbSeq> full;
        std::vector<WordProbSeq> fragments;
    };
    auto build_side = [&](const NewsArticle* a) {
        Side s;
        s.article = a;
        s.spans = split_sentences(a->text);
        MaskedScores ms = masked_scores(*anchor, *a, s.spans);
        s.sel = select_topk(a->id, ms.anchor, ms.masked, std::max(cfg.k, 1),
                            cfg.delta_mode);
        std::vector<std::size_t> all_idx(s.spans.size());
        std::iota(all_idx.begin(), all_idx.end(), 0);
        s.full = score_article_sentences(*scorer, cfg.prompt_id, *a, s.spans, all_idx);
        std::vector<std::size_t> frag_idx;
        for (const auto& [idx, delta] : s.sel.selected) frag_idx.push_back(idx);
        s.fragments =
            score_article_sentences(*scorer, cfg.prompt_id, *a, s.spans, frag_idx);
        return s;
    };
    Side rs = build_side(real);
    Side fks = build_side(fake);

    fs::path out(cfg.out_dir);
    auto write_curve = [&](const std::string& name, const std::vector<WordProbSeq>& seqs) {
        std::ostringstream csv;
        csv << "position,sentence_index,word,neg_log_prob\n";
        std::size_t pos = 0;
        for (const auto& s : seqs)
            for (const auto& w : s.words)
                csv << pos++ << "," << s.sentence_index << "," << w.word << ","
                    << format_double(-w.logprob) << "\n";
        write_file(out / name, csv.str());
    };
    write_curve("case_full_real.csv", rs.full);
    write_curve("case_full_fake.csv", fks.full);
    write_curve("case_fragment_real.csv", rs.fragments);
    write_curve("case_fragment_fake.csv", fks.fragments);

    auto write_weights = [&](const std::string& name, const Side& s) {
        MaskedScores ms = masked_scores(*anchor, *s.article, s.spans);
        std::ostringstream csv;
        csv << "sentence_index,delta,selected\n";
        std::unordered_set<std::size_t> chosen;
        for (const auto& [idx, delta] : s.sel.selected) chosen.insert(idx);
        for (std::size_t i = 0; i < s.spans.size(); ++i)
            csv << i << "," << format_double(std::fabs(ms.anchor - ms.masked[i])) << ","
                << (chosen.count(i) ? 1 : 0) << "\n";
        write_file(out / name, csv.str());
    };
    write_weights("case_weights_real.csv", rs);
    write_weights("case_weights_fake.csv", fks);

    auto mean_nlp = [](const std::vector<WordProbSeq>& seqs) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& s : seqs)
            for (const auto& w : s.words) {
                sum += -w.logprob;
                ++n;
            }
        return sum / static_cast<double>(n);
    };
    CaseStudyResult result;
    result.real_id = real->id;
    result.fake_id = fake->id;
    result.full_gap = mean_nlp(rs.full) - mean_nlp(fks.full);
    result.fragment_gap = mean_nlp(rs.fragments) - mean_nlp(fks.fragments);
    json j{{"real_id", result.real_id},
           {"fake_id", result.fake_id},
           {"full_gap", result.full_gap},
           {"fragment_gap", result.fragment_gap}};
    write_file(out / "case.json", j.dump(2) + "\n");
    write_run_meta(cfg, "case");
    return result;
}

}  // namespace life
