#include "best/protocol.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "best/cpu_timer.h"
#include "best/error.h"
#include "best/parallel.h"

namespace best {
namespace {

void CheckAligned(std::span<const SourceData> sources) {
  if (sources.empty()) throw InvalidInput("no sources to score");
  const SourceData& first = sources.front();
  for (const SourceData& s : sources) {
    if (s.train.target_classes() != first.train.target_classes() ||
        !std::ranges::equal(s.train.labels(), first.train.labels()) ||
        !std::ranges::equal(s.val.labels(), first.val.labels())) {
      throw InvalidInput("source '" + s.source_id +
                         "' is not row-aligned with '" + first.source_id +
                         "' (target labels differ)");
    }
  }
}

template <typename Get>
std::optional<double> MeanDefined(const std::vector<IterationResult>& its,
                                  Get get) {
  double sum = 0.0;
  int count = 0;
  for (const IterationResult& it : its) {
    if (const std::optional<double> v = get(*it.report)) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

}  // namespace

std::vector<std::size_t> StratifiedSubsample(std::span<const int> labels,
                                             int target_classes, double frac,
                                             Rng& rng) {
  if (!(frac > 0.0 && frac <= 1.0)) {
    throw InvalidInput("tl_frac must be in (0, 1]");
  }
  std::vector<std::vector<std::size_t>> rows(
      static_cast<std::size_t>(target_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rows[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
  }
  std::vector<std::size_t> out;
  for (auto& r : rows) {
    if (r.empty()) continue;
    const auto keep = std::clamp<std::size_t>(
        static_cast<std::size_t>(
            std::llround(frac * static_cast<double>(r.size()))),
        1, r.size());
    for (std::size_t i = 0; i < keep; ++i) {
      std::swap(r[i], r[i + rng.UniformIndex(r.size() - i)]);
    }
    out.insert(out.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(
                                                      keep));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ProtocolConfig::Validate() const {
  search.Validate();
  if (!(tl_frac > 0.0 && tl_frac <= 1.0)) {
    throw InvalidInput("tl_frac must be in (0, 1]");
  }
  if (iterations < 1) throw InvalidInput("iterations must be >= 1");
  if (report.slack < 0.0) throw InvalidInput("slack must be >= 0");
}

ProtocolResult RunProtocol(std::span<const SourceData> sources,
                           const std::optional<GroundTruth>& truth,
                           const ProtocolConfig& cfg) {
  cfg.Validate();
  CheckAligned(sources);
  const int n = sources.front().train.target_classes();

  ProtocolResult result;
  result.mean_metric.assign(sources.size(), 0.0);
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    IterationResult it;
    it.seed = DeriveSeed(cfg.seed, static_cast<std::uint64_t>(iter));

    std::vector<std::size_t> train_rows(sources.front().train.size());
    std::vector<std::size_t> val_rows(sources.front().val.size());
    std::iota(train_rows.begin(), train_rows.end(), 0);
    std::iota(val_rows.begin(), val_rows.end(), 0);
    if (cfg.tl_frac < 1.0) {
      Rng train_rng(DeriveSeed(it.seed, 100));
      Rng val_rng(DeriveSeed(it.seed, 101));
      train_rows = StratifiedSubsample(sources.front().train.labels(), n,
                                       cfg.tl_frac, train_rng);
      val_rows = StratifiedSubsample(sources.front().val.labels(), n,
                                     cfg.tl_frac, val_rng);
    }
    it.train_rows = train_rows.size();
    it.val_rows = val_rows.size();

    SearchConfig search = cfg.search;
    search.seed = it.seed;
    it.scores.resize(sources.size());
    ParallelFor(sources.size(), cfg.jobs, [&](std::size_t i) {
      const SourceData& src = sources[i];
      const LabeledDataset train = cfg.tl_frac < 1.0
                                       ? src.train.Subset(train_rows)
                                       : src.train;
      const LabeledDataset val =
          cfg.tl_frac < 1.0 ? src.val.Subset(val_rows) : src.val;
      const CpuTimer timer;
      const MetricResult r = ComputeMetric(train, val, search, cfg.method);
      it.scores[i] =
          SourceScore{src.source_id, r.metric.value(), r.q_star,
                      timer.Elapsed()};
    });
    it.ranks = RankSources(it.scores);
    if (truth) it.report = EvaluateRanking(it.scores, *truth, cfg.report);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      result.mean_metric[i] += it.scores[i].metric / cfg.iterations;
    }
    result.iterations.push_back(std::move(it));
  }

  if (truth) {
    ProtocolSummary s;
    std::size_t correct = 0;
    std::size_t total = 0;
    for (const IterationResult& it : result.iterations) {
      s.mean_fraction_correct += it.report->fraction_correct;
      s.mean_rank_dev += it.report->mean_dev;
      s.mean_rank_std += it.report->std_dev;
      correct += it.report->correct;
      total += it.report->source_ids.size();
    }
    s.mean_fraction_correct /= cfg.iterations;
    s.mean_rank_dev /= cfg.iterations;
    s.mean_rank_std /= cfg.iterations;
    s.pooled_fraction_correct =
        static_cast<double>(correct) / static_cast<double>(total);
    s.mean_pearson = MeanDefined(result.iterations, [](const RankReport& r) {
      return r.correlations.pearson;
    });
    s.mean_spearman = MeanDefined(result.iterations, [](const RankReport& r) {
      return r.correlations.spearman;
    });
    s.mean_kendall = MeanDefined(result.iterations, [](const RankReport& r) {
      return r.correlations.kendall;
    });
    result.summary = s;
  }
  return result;
}

}  // namespace best
