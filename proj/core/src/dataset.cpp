#include "dmcnet/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "dmcnet/flo.hpp"

namespace dmcnet {

Tensor4f mv_input(const EncodedVideo& v, int gop, int k) {
  const PFrame& pf = v.gops.at(std::size_t(gop)).pframes.at(std::size_t(k));
  FlowField dense = expand_mv(pf.mv);
  return flow_to_tensor(dense);
}

Tensor4f residual_input(const EncodedVideo& v, int gop, int k) {
  const PFrame& pf = v.gops.at(std::size_t(gop)).pframes.at(std::size_t(k));
  Tensor4f t(1, 3, v.height, v.width);
  for (std::size_t i = 0; i < pf.residual.values.size(); ++i)
    t.data[i] = float(pf.residual.values[i]) * kResidualScale;
  return t;
}

Tensor4f iframe_input(const EncodedVideo& v, int gop) {
  const Frame& f = v.gops.at(std::size_t(gop)).iframe;
  Tensor4f t(1, 3, f.h, f.w);
  for (std::size_t i = 0; i < f.pixels.size(); ++i)
    t.data[i] = float(f.pixels[i]) * kPixelScale;
  return t;
}

Tensor4f flow_to_tensor(const FlowField& f) {
  Tensor4f t(1, 2, f.h, f.w);
  std::copy(f.data.begin(), f.data.end(), t.data.begin());
  return t;
}

FlowField tensor_to_flow(const Tensor4f& t, int batch_index) {
  if (t.c != 2) throw DataError("tensor_to_flow: tensor must have 2 channels");
  FlowField f(t.h, t.w);
  const float* src = t.plane(batch_index, 0);
  std::copy(src, src + f.data.size(), f.data.begin());
  return f;
}

void copy_into_batch(Tensor4f& batch, int slot, const Tensor4f& sample) {
  if (sample.n != 1 || sample.c != batch.c || sample.h != batch.h ||
      sample.w != batch.w)
    throw DataError("copy_into_batch: sample shape " + sample.shape_str() +
                    " does not fit batch " + batch.shape_str());
  std::copy(sample.data.begin(), sample.data.end(), batch.plane(slot, 0));
}

Dataset load_dataset_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("load_dataset_dir: not a directory: " + dir);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".dmcv") names.push_back(entry.path().string());
  std::sort(names.begin(), names.end());
  if (names.empty()) throw DataError("load_dataset_dir: no .dmcv clips in " + dir);

  Dataset out;
  for (const std::string& name : names) {
    LabeledClip clip;
    clip.video = read_dmcv(name);
    const std::string stem = name.substr(0, name.size() - 5);  // strip ".dmcv"
    const int pcount = clip.pframe_count();
    for (int p = 0; p < pcount; ++p) {
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), ".p%02d.flo", p);
      const std::string flo_path = stem + suffix;
      if (!fs::exists(flo_path)) {
        if (p != 0)
          throw DataError("load_dataset_dir: clip has partial flow sidecars: " + name);
        break;  // clip without flow targets
      }
      clip.flows.push_back(read_flo(flo_path));
    }
    out.push_back(std::move(clip));
  }
  return out;
}

void save_dataset_dir(const std::string& dir, const Dataset& dataset) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "clip_%04zu", i);
    const std::string base = (fs::path(dir) / stem).string();
    write_dmcv(base + ".dmcv", dataset[i].video);
    for (std::size_t p = 0; p < dataset[i].flows.size(); ++p) {
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), ".p%02zu.flo", p);
      write_flo(base + suffix, dataset[i].flows[p]);
    }
  }
}

int class_count(const Dataset& dataset) {
  int max_label = -1;
  for (const LabeledClip& clip : dataset) {
    if (clip.video.label < 0)
      throw DataError("class_count: dataset contains unlabeled clips");
    max_label = std::max(max_label, clip.video.label);
  }
  return max_label + 1;
}

bool dataset_has_flow(const Dataset& dataset) {
  for (const LabeledClip& clip : dataset)
    if (int(clip.flows.size()) != clip.pframe_count()) return false;
  return !dataset.empty();
}

}  // namespace dmcnet
