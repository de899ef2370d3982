#include "dmcnet/recognition.hpp"

namespace dmcnet {

std::vector<double> fuse_scores(std::span<const StreamPrediction> predictions,
                                std::span<const double> weights) {
  if (predictions.empty()) throw DataError("fuse_scores: no stream predictions");
  if (weights.size() != predictions.size())
    throw DataError("fuse_scores: one weight per stream required");
  const std::size_t k = predictions[0].scores.size();
  double weight_sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DataError("fuse_scores: weights must be >= 0");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw DataError("fuse_scores: weights must not all be zero");

  std::vector<double> fused(k, 0.0);
  for (std::size_t s = 0; s < predictions.size(); ++s) {
    if (predictions[s].scores.size() != k)
      throw DataError("fuse_scores: score vectors have different lengths");
    for (std::size_t i = 0; i < k; ++i)
      fused[i] += weights[s] * predictions[s].scores[i];
  }
  for (double& v : fused) v /= weight_sum;

  double total = 0.0;
  for (double v : fused) total += v;
  if (total > 0.0)
    for (double& v : fused) v /= total;
  return fused;
}

double top1_accuracy(const std::vector<std::vector<double>>& scores,
                     std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw DataError("top1_accuracy: score/label counts differ");
  if (scores.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    int best = 0;
    for (int k = 1; k < int(scores[i].size()); ++k)
      if (scores[i][std::size_t(k)] > scores[i][std::size_t(best)]) best = k;
    if (best == labels[i]) ++correct;
  }
  return double(correct) / double(scores.size());
}

}  // namespace dmcnet
