#include "star/pipeline.hpp"

#include <atomic>
#include <memory>
#include <thread>
#include <unordered_map>

namespace star {

ProviderKind ParseProviderKind(const std::string& name) {
  if (name == "gold") return ProviderKind::kGold;
  if (name == "uniform") return ProviderKind::kUniform;
  throw Error(ErrorCode::kConfig, "unknown provider '" + name + "' (expected gold|uniform)");
}

namespace {

std::vector<std::string> UniformVocabulary(const ConstrainedDecoder& decoder) {
  std::set<std::string> vocab(decoder.span_vocabulary().begin(), decoder.span_vocabulary().end());
  for (const auto& t : decoder.schema().CategoryTokens()) vocab.insert(t);
  for (auto w : kSentimentWords) vocab.emplace(w);
  for (ElementKind k : kAllElements) vocab.emplace(MarkerSurface(k));
  vocab.emplace(kNullWord);
  vocab.emplace(kSeparatorToken);
  vocab.emplace(kEndToken);
  return {vocab.begin(), vocab.end()};
}

std::vector<PredictionRow> DecodeSentence(const AnnotatedSentence& s,
                                          const std::vector<DecodingSchema>& schemas,
                                          const DecodeOptions& options) {
  std::vector<PredictionRow> rows;
  GenerationOptions gen{options.beam, options.max_steps};
  for (const auto& schema : schemas) {
    const auto& order = schema.expected_order();
    std::string input = QuadPrompt(s.sentence, order);
    std::unique_ptr<NextTokenDistributionProvider> provider;
    if (options.provider == ProviderKind::kGold) {
      auto gold = std::make_unique<GoldProvider>();
      if (!s.quads.empty()) gold->Add(input, RenderQuadInstance(s.sentence, s.quads, order).target);
      provider = std::move(gold);
    } else {
      ConstrainedDecoder decoder(schema, s.sentence);
      provider = std::make_unique<UniformRandomProvider>(UniformVocabulary(decoder), options.seed);
    }
    auto result = ConstrainedGenerate(input, s.sentence, schema, *provider, gen);
    rows.push_back({s.sentence.id, order.surface(), std::move(result.sequence)});
  }
  return rows;
}

}  // namespace

std::vector<PredictionRow> DecodeDataset(const Dataset& d, const std::vector<OrderTemplate>& orders,
                                         const Taxonomy& taxonomy, const DecodeOptions& options) {
  if (orders.empty()) throw Error(ErrorCode::kConfig, "decode needs at least one order");
  std::vector<DecodingSchema> schemas;
  for (const auto& t : orders) schemas.emplace_back(taxonomy, t, options.strict_spans);

  std::vector<std::vector<PredictionRow>> per_sentence(d.sentences.size());
  const size_t jobs = std::max<size_t>(1, std::min(options.jobs, d.sentences.size()));
  if (jobs <= 1) {
    for (size_t i = 0; i < d.sentences.size(); ++i)
      per_sentence[i] = DecodeSentence(d.sentences[i], schemas, options);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (size_t i = next++; i < d.sentences.size(); i = next++)
            per_sentence[i] = DecodeSentence(d.sentences[i], schemas, options);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<PredictionRow> rows;
  for (auto& block : per_sentence)
    for (auto& r : block) rows.push_back(std::move(r));
  return rows;
}

ValidationSummary ValidatePredictionRows(const std::vector<PredictionRow>& rows, const Dataset& d,
                                         const Taxonomy& taxonomy, bool strict_spans) {
  std::unordered_map<std::string, const Sentence*> by_id;
  for (const auto& s : d.sentences) by_id.emplace(s.sentence.id, &s.sentence);
  ValidationSummary summary;
  summary.rows = rows.size();
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    auto it = by_id.find(row.source_id);
    if (it == by_id.end()) {
      summary.invalid.push_back({i, row.source_id, "unknown sentence id"});
      continue;
    }
    DecodingSchema schema(taxonomy, OrderTemplate::Parse(row.order), strict_spans);
    auto verdict = ValidateSequence(row.sequence, *it->second, schema);
    if (!verdict.valid) summary.invalid.push_back({i, row.source_id, verdict.message});
  }
  return summary;
}

EvalReport EvaluatePredictions(const std::vector<SentencePrediction>& predictions,
                               const Dataset& gold, bool missing_as_empty) {
  // Both sides pass through the target-space round trip, so a literal "it"
  // span compares as NULL on either side.
  auto normalise = [](const Quad& q) { return UnmapQuad(MapQuad(q)); };
  QuadSets gold_sets, pred_sets;
  for (const auto& s : gold.sentences) {
    auto& slot = gold_sets[s.sentence.id];
    for (const auto& q : s.quads) slot.insert(normalise(q));
  }
  for (const auto& p : predictions) {
    auto& slot = pred_sets[p.source_id];
    for (const auto& q : p.quads) slot.insert(normalise(q));
  }
  if (missing_as_empty) {
    for (const auto& [id, _] : gold_sets) pred_sets.try_emplace(id);
  }
  return ScoreExactMatch(pred_sets, gold_sets);
}

}  // namespace star
