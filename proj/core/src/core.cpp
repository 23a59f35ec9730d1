#include "qgcnet/core.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace qgc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case Errc::DuplicateEntityId: return "DuplicateEntityId";
    case Errc::WindowOutOfBounds: return "WindowOutOfBounds";
    case Errc::InvalidTau: return "InvalidTau";
    case Errc::DegenerateDesign: return "DegenerateDesign";
    case Errc::NegativeLambda: return "NegativeLambda";
    case Errc::Unbounded: return "Unbounded";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::MissingStandardErrors: return "MissingStandardErrors";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ConstantSeries: return "ConstantSeries";
    case Errc::TooShort: return "TooShort";
    case Errc::OptimizationFailed: return "OptimizationFailed";
    case Errc::InvalidK: return "InvalidK";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::ConstantInput: return "ConstantInput";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::UnknownEvent: return "UnknownEvent";
    case Errc::InvalidP: return "InvalidP";
    case Errc::UnstableVAR: return "UnstableVAR";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

ReturnPanel validate_panel(Matrix raw, std::vector<std::string> timestamps,
                           std::vector<std::string> entity_ids) {
  if (raw.rows() == 0 || raw.cols() == 0) {
    throw Error(Errc::DimensionMismatch, "panel must have at least one row and one column");
  }
  if (static_cast<Index>(timestamps.size()) != raw.rows()) {
    throw Error(Errc::DimensionMismatch,
                "timestamp count " + std::to_string(timestamps.size()) +
                    " does not match row count " + std::to_string(raw.rows()));
  }
  if (static_cast<Index>(entity_ids.size()) != raw.cols()) {
    throw Error(Errc::DimensionMismatch,
                "entity id count " + std::to_string(entity_ids.size()) +
                    " does not match column count " + std::to_string(raw.cols()));
  }
  for (Index j = 0; j < raw.cols(); ++j) {
    for (Index t = 0; t < raw.rows(); ++t) {
      if (!std::isfinite(raw(t, j))) {
        throw Error(Errc::NonFiniteValue, "non-finite value at row " + std::to_string(t) +
                                              ", column " + entity_ids[j]);
      }
    }
  }
  for (std::size_t t = 1; t < timestamps.size(); ++t) {
    if (!(timestamps[t - 1] < timestamps[t])) {
      throw Error(Errc::NonMonotonicTimestamps,
                  "timestamps not strictly increasing at '" + timestamps[t] + "'");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : entity_ids) {
    if (!seen.insert(id).second) {
      throw Error(Errc::DuplicateEntityId, "duplicate entity id '" + id + "'");
    }
  }
  ReturnPanel panel;
  panel.values_ = std::move(raw);
  panel.timestamps_ = std::move(timestamps);
  panel.entity_ids_ = std::move(entity_ids);
  return panel;
}

ReturnPanel ReturnPanel::with_values(Matrix values) const {
  return validate_panel(std::move(values), timestamps_, entity_ids_);
}

ReturnPanel slice(const ReturnPanel& panel, Window window) {
  const auto total = static_cast<std::size_t>(panel.num_times());
  if (window.length == 0 || window.start_index > total || window.length > total - window.start_index) {
    throw Error(Errc::WindowOutOfBounds,
                "window (" + std::to_string(window.start_index) + ", " +
                    std::to_string(window.length) + ") does not fit a panel of " +
                    std::to_string(total) + " rows");
  }
  const auto start = static_cast<Index>(window.start_index);
  const auto len = static_cast<Index>(window.length);
  std::vector<std::string> stamps(panel.timestamps().begin() + start,
                                  panel.timestamps().begin() + start + len);
  return validate_panel(panel.values().middleRows(start, len), std::move(stamps),
                        panel.entity_ids());
}

ReturnPanel make_unlabeled_panel(Matrix values) {
  std::vector<std::string> stamps;
  std::vector<std::string> ids;
  char buf[32];
  for (Index t = 0; t < values.rows(); ++t) {
    std::snprintf(buf, sizeof buf, "t%06ld", static_cast<long>(t));
    stamps.emplace_back(buf);
  }
  for (Index j = 0; j < values.cols(); ++j) {
    ids.push_back("x" + std::to_string(j));
  }
  return validate_panel(std::move(values), std::move(stamps), std::move(ids));
}

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(Errc::InvalidTau, "tau must lie in (0, 1), got " + std::to_string(tau));
  }
}

std::string_view to_string(NetworkMethod method) noexcept {
  switch (method) {
    case NetworkMethod::GcBivariate: return "GC_bivariate";
    case NetworkMethod::GcMultivariate: return "GC_multivariate";
    case NetworkMethod::QgcBivariate: return "QGC_bivariate";
    case NetworkMethod::QgcMultivariate: return "QGC_multivariate";
  }
  return "unknown";
}

bool is_quantile(NetworkMethod method) noexcept {
  return method == NetworkMethod::QgcBivariate || method == NetworkMethod::QgcMultivariate;
}

Network::Network(Adjacency adjacency, std::vector<std::string> entity_ids, NetworkMethod method,
                 std::optional<double> tau, Window window)
    : adjacency_(std::move(adjacency)),
      entity_ids_(std::move(entity_ids)),
      method_(method),
      tau_(tau),
      window_(window) {
  const Index p = adjacency_.rows();
  if (adjacency_.cols() != p || static_cast<Index>(entity_ids_.size()) != p) {
    throw Error(Errc::DimensionMismatch, "adjacency must be square and match entity count");
  }
  if (is_quantile(method_) != tau_.has_value()) {
    throw Error(Errc::InvalidConfig, "tau must be present exactly for quantile networks");
  }
  for (Index i = 0; i < p; ++i) {
    if (adjacency_(i, i) != 0) {
      throw Error(Errc::DimensionMismatch, "adjacency diagonal must be zero");
    }
    for (Index j = 0; j < i; ++j) {
      const int a = adjacency_(i, j);
      if ((a != 0 && a != 1) || a != adjacency_(j, i)) {
        throw Error(Errc::DimensionMismatch, "adjacency must be symmetric and binary");
      }
    }
  }
}

Index Network::edge_count() const {
  Index count = 0;
  for (Index i = 0; i < size(); ++i) {
    for (Index j = i + 1; j < size(); ++j) count += adjacency_(i, j);
  }
  return count;
}

Adjacency symmetrize_support(const Adjacency& directed) {
  const Index p = directed.rows();
  Adjacency out = Adjacency::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      if (directed(i, j) != 0 || directed(j, i) != 0) {
        out(i, j) = 1;
        out(j, i) = 1;
      }
    }
  }
  return out;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace qgc
