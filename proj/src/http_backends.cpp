#include <stdexcept>

#include "httplib.h"
#include "json.hpp"
#include "life/fragments.hpp"
#include "life/scorer.hpp"

namespace life {

using nlohmann::json;

namespace {

// Splits "http://host:port" into pieces httplib::Client wants.
httplib::Client make_client(const std::string& endpoint, int timeout_seconds) {
    httplib::Client cli(endpoint);
    cli.set_connection_timeout(timeout_seconds, 0);
    cli.set_read_timeout(timeout_seconds, 0);
    cli.set_write_timeout(timeout_seconds, 0);
    return cli;
}

json post_json(const std::string& endpoint, int timeout_seconds, int retries,
               const std::string& path, const json& body) {
    std::string last_error;
    for (int attempt = 0; attempt <= retries; ++attempt) {
        auto cli = make_client(endpoint, timeout_seconds);
        auto res = cli.Post(path, body.dump(), "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200)
            throw std::runtime_error(path + " returned HTTP " +
                                     std::to_string(res->status));
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded())
            throw std::runtime_error(path + " response is not valid JSON");
        return parsed;
    }
    throw std::runtime_error(path + " failed after " + std::to_string(retries + 1) +
                             " attempts: " + last_error);
}

}  // namespace

HttpScorer::HttpScorer(HttpScorerConfig cfg) : cfg_(std::move(cfg)) {}

WordProbSeq HttpScorer::score_sentence(const RenderedPrompt& prompt,
                                       const std::string& preceding,
                                       const SentenceSpan& sentence) const {
    if (sentence.words.empty())
        throw std::runtime_error("cannot score an empty sentence");
    json req;
    // The rendered prompt already carries the preceding context in its
    // {preceding} slot; `preceding` is only used by local backends.
    (void)preceding;
    req["prompt"] = prompt.text;
    req["text"] = sentence.text;
    json resp = post_json(cfg_.endpoint, cfg_.timeout_seconds, cfg_.retries,
                          "/v1/logprobs", req);

    if (!resp.contains("pieces") || !resp["pieces"].is_array())
        throw std::runtime_error("scorer response missing field \"pieces\"");
    std::vector<std::pair<std::string, double>> pieces;
    for (const auto& p : resp["pieces"]) {
        if (!p.contains("text"))
            throw std::runtime_error("scorer response piece missing field \"text\"");
        if (!p.contains("logprob"))
            throw std::runtime_error("scorer response piece missing field \"logprob\"");
        pieces.emplace_back(p["text"].get<std::string>(), p["logprob"].get<double>());
    }

    WordProbSeq seq;
    seq.sentence_index = static_cast<int>(sentence.index);
    seq.prompt_id = prompt.id;
    seq.backend_id = id();
    seq.words = merge_pieces_into_words(sentence.text, sentence.words, pieces);
    return seq;
}

HttpClassifier::HttpClassifier(HttpClassifierConfig cfg) : cfg_(std::move(cfg)) {}

double HttpClassifier::predict_fake_prob(const std::string& text) const {
    json req;
    req["text"] = text;
    json resp = post_json(cfg_.endpoint, cfg_.timeout_seconds, cfg_.retries,
                          "/v1/classify", req);
    if (!resp.contains("prob_fake"))
        throw std::runtime_error("classifier response missing field \"prob_fake\"");
    double p = resp["prob_fake"].get<double>();
    if (!(p >= 0.0 && p <= 1.0))
        throw std::runtime_error("classifier returned prob_fake outside [0,1]");
    return p;
}

}  // namespace life
