#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dvq {

struct SplitSizes {
  size_t train = 8000;
  size_t val = 1000;
  size_t test = 1000;
};

/// The three output corpora, as verbatim input lines so splitting never
/// perturbs a single byte of an example.
struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

/// Splits a dataset of JSONL example lines into train/val/test.
///
/// All examples sharing one dvq string form a group and land in the
/// same split, so no visualization leaks across splits. Group order is
/// shuffled by a seeded Fisher-Yates pass (fixed algorithm, not the
/// standard library's unspecified std::shuffle), then each group goes
/// to the first split that still has room for all of it. Groups left
/// over once every quota is filled stay unassigned. Quotas must be met
/// exactly; if the greedy pass cannot, this throws.
inline DatasetSplit split_dataset(const std::vector<std::string>& lines, uint64_t seed,
                                  SplitSizes sizes) {
  size_t want = sizes.train + sizes.val + sizes.test;
  if (want > lines.size()) {
    throw std::runtime_error("split sizes need " + std::to_string(want) +
                             " examples but the dataset has " + std::to_string(lines.size()));
  }

  std::map<std::string, size_t> group_of_dvq;  // dvq -> group index
  std::vector<std::vector<size_t>> groups;     // group -> line indices, first-seen order
  for (size_t i = 0; i < lines.size(); ++i) {
    nlohmann::json j = nlohmann::json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.contains("dvq") || !j["dvq"].is_string()) {
      throw std::runtime_error("dataset line " + std::to_string(i + 1) +
                               " is not an example object with a dvq field");
    }
    std::string dvq = j["dvq"].get<std::string>();
    auto [it, inserted] = group_of_dvq.try_emplace(std::move(dvq), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  std::vector<size_t> order(groups.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 gen(seed);
  for (size_t i = order.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(gen() % i);
    std::swap(order[i - 1], order[j]);
  }

  constexpr size_t kUnassigned = SIZE_MAX;
  std::vector<size_t> split_of_group(groups.size(), kUnassigned);
  size_t room[3] = {sizes.train, sizes.val, sizes.test};
  for (size_t g : order) {
    size_t size = groups[g].size();
    for (size_t s = 0; s < 3; ++s) {
      if (room[s] >= size) {
        split_of_group[g] = s;
        room[s] -= size;
        break;
      }
    }
  }
  if (room[0] + room[1] + room[2] > 0) {
    throw std::runtime_error(
        "cannot fill the requested split sizes exactly: short by " + std::to_string(room[0]) +
        " train, " + std::to_string(room[1]) + " val, " + std::to_string(room[2]) +
        " test examples (group sizes do not pack the quotas)");
  }

  DatasetSplit out;
  std::vector<std::string>* buckets[3] = {&out.train, &out.val, &out.test};
  std::vector<size_t> split_of_line(lines.size(), kUnassigned);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (size_t line : groups[g]) split_of_line[line] = split_of_group[g];
  }
  for (size_t i = 0; i < lines.size(); ++i) {
    if (split_of_line[i] == kUnassigned) continue;  // beyond the quotas, stays out
    buckets[split_of_line[i]]->push_back(lines[i]);
  }
  return out;
}

}  // namespace dvq
