// Copyright 2026 The Medchain Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "medchain/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "medchain/error.h"
#include "medchain/ledger.h"

namespace medchain {
namespace {

using nlohmann::json;

// Thrown inside the parser and converted to a status at the boundary.
struct FieldError {
  ErrorKind kind;
  std::string message;
};

[[noreturn]] void Fail(ErrorKind kind, std::string message) {
  throw FieldError{kind, std::move(message)};
}

// Typed access to one JSON object, remembering which keys were consumed so
// leftovers can be reported.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      Fail(ErrorKind::kParseError,
           absl::StrCat("field '", path_, "': expected an object"));
    }
  }

  bool Has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  double Number(const std::string& key, double fallback) {
    if (!Has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number()) TypeError(key, "a number");
    return v.get<double>();
  }

  std::int64_t Integer(const std::string& key, std::int64_t fallback) {
    if (!Has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) TypeError(key, "an integer");
    return v.get<std::int64_t>();
  }

  bool Bool(const std::string& key, bool fallback) {
    if (!Has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) TypeError(key, "a boolean");
    return v.get<bool>();
  }

  std::string String(const std::string& key, const std::string& fallback) {
    if (!Has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) TypeError(key, "a string");
    return v.get<std::string>();
  }

  Range RangeOf(const std::string& key, Range fallback) {
    if (!Has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number()) {
      TypeError(key, "a [lo, hi] pair of numbers");
    }
    return Range{v[0].get<double>(), v[1].get<double>()};
  }

  Section Child(const std::string& key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    if (!obj_.contains(key) || obj_.at(key).is_null()) {
      return Section(kEmpty, Path(key));
    }
    return Section(obj_.at(key), Path(key));
  }

  void RejectUnknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        Fail(ErrorKind::kValidationError,
             absl::StrCat("unknown field '", Path(it.key()), "'"));
      }
    }
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : absl::StrCat(path_, ".", key);
  }

 private:
  [[noreturn]] void TypeError(const std::string& key, std::string_view want) {
    Fail(ErrorKind::kParseError,
         absl::StrCat("field '", Path(key), "': expected ", Sv(want)));
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::size_t LineOf(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

absl::Status Invalid(std::string_view message) {
  return MakeError(ErrorKind::kValidationError, message);
}

absl::Status CheckRange(const Range& r, std::string_view name, double min_lo) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    return Invalid(absl::StrCat("range '", Sv(name), "' is empty"));
  }
  if (r.lo < min_lo) {
    return Invalid(absl::StrCat("range '", Sv(name), "' must start at >= ", min_lo));
  }
  return absl::OkStatus();
}

const char* UnitName(PowerUnit unit) {
  return unit == PowerUnit::kDbW ? "dBW" : "dBm";
}

const char* ArchName(Architecture arch) {
  return arch == Architecture::kLogisticRegression ? "logistic_regression"
                                                   : "two_layer_mlp";
}

const char* AccountingName(UtilityAccounting a) {
  return a == UtilityAccounting::kPairwise ? "pairwise" : "realized";
}

ExperimentConfig ParseDocument(const json& doc) {
  ExperimentConfig cfg;
  Section root(doc, "");
  if (!root.Has("seed")) Fail(ErrorKind::kValidationError, "missing 'seed'");
  {
    const json& seed = doc.at("seed");
    if (!seed.is_number_integer() ||
        (seed.is_number_integer() && !seed.is_number_unsigned() &&
         seed.get<std::int64_t>() < 0)) {
      Fail(ErrorKind::kParseError,
           "field 'seed': expected a non-negative integer");
    }
    cfg.seed = seed.get<std::uint64_t>();
  }
  cfg.label = root.String("label", "");

  Section pop = root.Child("population");
  cfg.num_mcs = pop.Integer("num_mcs", cfg.num_mcs);
  cfg.num_miners = pop.Integer("num_miners", cfg.num_miners);
  pop.RejectUnknown();

  Section ranges = root.Child("ranges");
  cfg.cpu_rate_ghz = ranges.RangeOf("cpu_rate_ghz", cfg.cpu_rate_ghz);
  cfg.cycles_per_sample =
      ranges.RangeOf("cycles_per_sample", cfg.cycles_per_sample);
  cfg.tx_power_db = ranges.RangeOf("tx_power_db", cfg.tx_power_db);
  const std::string unit = ranges.String("tx_power_unit", "dBW");
  if (unit == "dBW") {
    cfg.tx_power_unit = PowerUnit::kDbW;
  } else if (unit == "dBm") {
    cfg.tx_power_unit = PowerUnit::kDbm;
  } else {
    Fail(ErrorKind::kValidationError,
         "field 'ranges.tx_power_unit' must be \"dBW\" or \"dBm\"");
  }
  cfg.prb_count = ranges.RangeOf("prb_count", cfg.prb_count);
  cfg.sinr_db = ranges.RangeOf("sinr_db", cfg.sinr_db);
  ranges.RejectUnknown();

  cfg.local_iters =
      static_cast<std::int32_t>(root.Integer("local_iters", cfg.local_iters));

  Section sys = root.Child("system");
  cfg.sys.kappa = sys.Number("kappa", cfg.sys.kappa);
  cfg.sys.phi = sys.Number("phi", cfg.sys.phi);
  cfg.sys.mining_reward = sys.Number("mining_reward", cfg.sys.mining_reward);
  cfg.sys.global_iters = static_cast<std::int32_t>(
      sys.Integer("global_iters", cfg.sys.global_iters));
  cfg.sys.threshold_s = sys.Number("threshold_s", cfg.sys.threshold_s);
  cfg.sys.model_bits = sys.Number("model_bits", cfg.sys.model_bits);
  cfg.sys.prb_bandwidth_hz =
      sys.Number("prb_bandwidth_hz", cfg.sys.prb_bandwidth_hz);
  cfg.sys.rho = sys.Number("rho", cfg.sys.rho);
  cfg.sys.eta = sys.Number("eta", cfg.sys.eta);
  sys.RejectUnknown();

  Section priv = root.Child("privacy");
  if (priv.Has("epsilon")) cfg.privacy.epsilon = priv.Number("epsilon", 0.0);
  cfg.privacy.delta = priv.Number("delta", cfg.privacy.delta);
  const bool explicit_sigma = priv.Has("noise_scale");
  cfg.privacy.noise_scale =
      priv.Number("noise_scale", cfg.privacy.noise_scale);
  cfg.privacy.clip_bound = priv.Number("clip_bound", cfg.privacy.clip_bound);
  cfg.privacy.batch_size = priv.Integer("batch_size", cfg.privacy.batch_size);
  cfg.privacy.learning_rate =
      priv.Number("learning_rate", cfg.privacy.learning_rate);
  cfg.lr_plateau = priv.Bool("lr_plateau", cfg.lr_plateau);
  priv.RejectUnknown();
  if (cfg.privacy.epsilon.has_value()) {
    absl::StatusOr<double> sigma =
        SigmaFromBudget(*cfg.privacy.epsilon, cfg.privacy.delta);
    if (!sigma.ok()) Fail(ErrorKind::kValidationError,
                          std::string(sigma.status().message()));
    if (!explicit_sigma) {
      cfg.privacy.noise_scale = *sigma;
    } else if (std::abs(cfg.privacy.noise_scale - *sigma) >
               1e-12 * std::max(1.0, *sigma)) {
      Fail(ErrorKind::kValidationError,
           absl::StrCat("privacy.noise_scale ", cfg.privacy.noise_scale,
                        " disagrees with sigma ", *sigma,
                        " derived from (epsilon, delta)"));
    }
  }

  Section assoc = root.Child("association");
  const std::string mode = assoc.String("mode", "mma");
  if (mode == "mma") {
    cfg.association_mode = AssociationMode::kMma;
  } else if (mode == "random") {
    cfg.association_mode = AssociationMode::kRandom;
  } else {
    Fail(ErrorKind::kValidationError,
         "field 'association.mode' must be \"mma\" or \"random\"");
  }
  const std::string orient = assoc.String("orientation", "self_utility");
  if (orient == "self_utility") {
    cfg.orientation = Orientation::kSelfUtility;
  } else if (orient == "as_written") {
    cfg.orientation = Orientation::kAsWritten;
  } else {
    Fail(ErrorKind::kValidationError,
         "field 'association.orientation' must be \"self_utility\" or "
         "\"as_written\"");
  }
  cfg.assoc_count = assoc.Integer("assoc_count", cfg.assoc_count);
  if (assoc.Has("miner_capacity")) {
    const std::int64_t cap = assoc.Integer("miner_capacity", 0);
    if (cap < 1) {
      Fail(ErrorKind::kValidationError,
           "field 'association.miner_capacity' must be >= 1");
    }
    cfg.miner_capacity = static_cast<std::size_t>(cap);
  }
  const std::string acct = assoc.String("utility_accounting", "pairwise");
  if (acct == "pairwise") {
    cfg.utility_accounting = UtilityAccounting::kPairwise;
  } else if (acct == "realized") {
    cfg.utility_accounting = UtilityAccounting::kRealized;
  } else {
    Fail(ErrorKind::kValidationError,
         "field 'association.utility_accounting' must be \"pairwise\" or "
         "\"realized\"");
  }
  assoc.RejectUnknown();

  Section data = root.Child("dataset");
  if (data.Has("samples_per_mc")) {
    cfg.samples_per_mc = data.Integer("samples_per_mc", 0);
  }
  const std::int64_t dim = data.Integer("feature_dim", 20);
  if (dim < 0) Fail(ErrorKind::kValidationError, "feature_dim must be >= 0");
  cfg.feature_dim = static_cast<std::size_t>(dim);
  cfg.separation = data.Number("separation", cfg.separation);
  cfg.test_samples = data.Integer("test_samples", cfg.test_samples);
  data.RejectUnknown();

  Section model = root.Child("model");
  const std::string arch = model.String("architecture", "logistic_regression");
  if (arch == "logistic_regression") {
    cfg.model.arch = Architecture::kLogisticRegression;
  } else if (arch == "two_layer_mlp") {
    cfg.model.arch = Architecture::kTwoLayerMlp;
  } else {
    Fail(ErrorKind::kValidationError,
         "field 'model.architecture' must be \"logistic_regression\" or "
         "\"two_layer_mlp\"");
  }
  const std::int64_t hidden = model.Integer("hidden", 16);
  if (hidden < 1) Fail(ErrorKind::kValidationError, "model.hidden must be >= 1");
  cfg.model.hidden = static_cast<std::size_t>(hidden);
  model.RejectUnknown();
  cfg.model.input_dim = cfg.feature_dim;

  Section ledger = root.Child("ledger");
  cfg.difficulty = static_cast<int>(ledger.Integer("difficulty", 8));
  ledger.RejectUnknown();

  root.RejectUnknown();
  return cfg;
}

}  // namespace

std::int64_t ExperimentConfig::SamplesPerMc() const {
  if (samples_per_mc.has_value()) return *samples_per_mc;
  return num_mcs > 0 ? 5270 / num_mcs : 0;
}

absl::Status ExperimentConfig::Validate() const {
  if (num_mcs < 1) return Invalid("population.num_mcs must be >= 1");
  if (num_miners < 1) return Invalid("population.num_miners must be >= 1");
  if (absl::Status s = CheckRange(cpu_rate_ghz, "cpu_rate_ghz", 0.0); !s.ok()) return s;
  if (!(cpu_rate_ghz.lo > 0)) return Invalid("range 'cpu_rate_ghz' must be > 0");
  if (absl::Status s = CheckRange(cycles_per_sample, "cycles_per_sample", 0.0); !s.ok()) return s;
  if (!(cycles_per_sample.lo > 0)) {
    return Invalid("range 'cycles_per_sample' must be > 0");
  }
  if (absl::Status s = CheckRange(tx_power_db, "tx_power_db", -1e9); !s.ok()) return s;
  if (absl::Status s = CheckRange(prb_count, "prb_count", 1.0); !s.ok()) return s;
  if (std::floor(prb_count.hi) < std::ceil(prb_count.lo)) {
    return Invalid("range 'prb_count' contains no integer");
  }
  if (absl::Status s = CheckRange(sinr_db, "sinr_db", -1e9); !s.ok()) return s;
  if (local_iters < 1) return Invalid("local_iters must be >= 1");
  if (absl::Status s = sys.Validate(); !s.ok()) return s;
  if (absl::Status s = privacy.Validate(); !s.ok()) return s;
  if (assoc_count < 1) return Invalid("association.assoc_count must be >= 1");
  if (SamplesPerMc() < 1) return Invalid("dataset.samples_per_mc must be >= 1");
  if (test_samples < 0) return Invalid("dataset.test_samples must be >= 0");
  if (!std::isfinite(separation) || separation < 0) {
    return Invalid("dataset.separation must be finite and >= 0");
  }
  if (model.input_dim != feature_dim) {
    return Invalid("model input dimension differs from dataset.feature_dim");
  }
  if (difficulty < 0 || difficulty > 64) {
    return Invalid("ledger.difficulty must lie in [0, 64]");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("line ", LineOf(text, e.byte), ": ",
                                  e.what()));
  }
  ExperimentConfig cfg;
  try {
    cfg = ParseDocument(doc);
  } catch (const FieldError& e) {
    return MakeError(e.kind, e.message);
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kParseError, e.what());
  }
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  return cfg;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIoError, absl::StrCat("cannot open ", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string ConfigToJson(const ExperimentConfig& cfg) {
  auto range = [](const Range& r) { return json::array({r.lo, r.hi}); };
  json doc{
      {"seed", cfg.seed},
      {"label", cfg.label},
      {"population", {{"num_mcs", cfg.num_mcs}, {"num_miners", cfg.num_miners}}},
      {"ranges",
       {{"cpu_rate_ghz", range(cfg.cpu_rate_ghz)},
        {"cycles_per_sample", range(cfg.cycles_per_sample)},
        {"tx_power_db", range(cfg.tx_power_db)},
        {"tx_power_unit", UnitName(cfg.tx_power_unit)},
        {"prb_count", range(cfg.prb_count)},
        {"sinr_db", range(cfg.sinr_db)}}},
      {"local_iters", cfg.local_iters},
      {"system",
       {{"kappa", cfg.sys.kappa},
        {"phi", cfg.sys.phi},
        {"mining_reward", cfg.sys.mining_reward},
        {"global_iters", cfg.sys.global_iters},
        {"threshold_s", cfg.sys.threshold_s},
        {"model_bits", cfg.sys.model_bits},
        {"prb_bandwidth_hz", cfg.sys.prb_bandwidth_hz},
        {"rho", cfg.sys.rho},
        {"eta", cfg.sys.eta}}},
      {"privacy",
       {{"epsilon", cfg.privacy.epsilon.has_value()
                        ? json(*cfg.privacy.epsilon)
                        : json(nullptr)},
        {"delta", cfg.privacy.delta},
        {"noise_scale", cfg.privacy.noise_scale},
        {"clip_bound", cfg.privacy.clip_bound},
        {"batch_size", cfg.privacy.batch_size},
        {"learning_rate", cfg.privacy.learning_rate},
        {"lr_plateau", cfg.lr_plateau}}},
      {"association",
       {{"mode", AssociationModeName(cfg.association_mode)},
        {"orientation", OrientationName(cfg.orientation)},
        {"assoc_count", cfg.assoc_count},
        {"miner_capacity", cfg.miner_capacity.has_value()
                               ? json(*cfg.miner_capacity)
                               : json(nullptr)},
        {"utility_accounting", AccountingName(cfg.utility_accounting)}}},
      {"dataset",
       {{"samples_per_mc", cfg.SamplesPerMc()},
        {"feature_dim", cfg.feature_dim},
        {"separation", cfg.separation},
        {"test_samples", cfg.test_samples}}},
      {"model", {{"architecture", ArchName(cfg.model.arch)},
                 {"hidden", cfg.model.hidden}}},
      {"ledger", {{"difficulty", cfg.difficulty}}}};
  return doc.dump();
}

std::string ConfigDigest(const ExperimentConfig& cfg) {
  const std::string text = ConfigToJson(cfg);
  const Digest d = Sha256(std::span(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return ToHex(d).substr(0, 16);
}

std::string_view AssociationModeName(AssociationMode mode) {
  return mode == AssociationMode::kMma ? "mma" : "random";
}

std::string_view OrientationName(Orientation orientation) {
  return orientation == Orientation::kSelfUtility ? "self_utility"
                                                  : "as_written";
}

}  // namespace medchain
