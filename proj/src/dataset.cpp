#include "meboost/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace meboost {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && lower(s.substr(0, prefix.size())) == prefix;
}

std::optional<double> to_double(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string> split_list(std::string_view s, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Splits one CSV record. Double quotes group fields; "" inside quotes is a
// literal quote.
std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.emplace_back(trim(field));
  return out;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

bool is_missing(std::string_view token) {
  return token == "?" || token == "<null>" || token.empty();
}

// Class tokens in first-seen (or declared) order with their row counts.
struct ClassTokens {
  std::vector<std::string> order;  // first-seen or declared order
  std::map<std::string, std::size_t> counts;

  void declare(const std::string& token) {
    if (!counts.contains(token)) {
      order.push_back(token);
      counts[token] = 0;
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<double> features, std::size_t n_features, std::vector<Label> labels,
                 std::vector<std::string> feature_names, std::string positive_class_name,
                 std::string negative_class_name, std::vector<std::uint64_t> ids)
    : features_(std::move(features)),
      n_features_(n_features),
      labels_(std::move(labels)),
      ids_(std::move(ids)),
      feature_names_(std::move(feature_names)),
      positive_class_name_(std::move(positive_class_name)),
      negative_class_name_(std::move(negative_class_name)) {
  if (n_features_ == 0 && !labels_.empty()) throw InvalidArgument("dataset has no features");
  if (features_.size() != labels_.size() * n_features_) {
    throw InvalidArgument("feature matrix has " + std::to_string(features_.size()) +
                          " values, expected " + std::to_string(labels_.size() * n_features_));
  }
  if (std::any_of(features_.begin(), features_.end(), [](double v) { return !std::isfinite(v); })) {
    throw InvalidArgument("feature matrix contains non-finite values");
  }
  if (ids_.empty()) {
    ids_.resize(labels_.size());
    std::iota(ids_.begin(), ids_.end(), std::uint64_t{0});
  } else if (ids_.size() != labels_.size()) {
    throw InvalidArgument("instance id count does not match row count");
  }
  if (feature_names_.empty()) {
    for (std::size_t j = 0; j < n_features_; ++j) feature_names_.push_back("x" + std::to_string(j));
  } else if (feature_names_.size() != n_features_) {
    throw InvalidArgument("feature name count does not match feature count");
  }
}

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> features;
  features.reserve(rows.size() * n_features_);
  std::vector<Label> labels;
  labels.reserve(rows.size());
  std::vector<std::uint64_t> ids;
  ids.reserve(rows.size());
  for (const std::size_t r : rows) {
    if (r >= size()) throw InvalidArgument("row index out of range");
    const auto x = row(r);
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(labels_[r]);
    ids.push_back(ids_[r]);
  }
  return Dataset(std::move(features), n_features_, std::move(labels), feature_names_,
                 positive_class_name_, negative_class_name_, std::move(ids));
}

Dataset Dataset::with_rows(std::span<const double> features, std::span<const Label> labels,
                           std::span<const std::uint64_t> ids) const {
  if (features.size() != labels.size() * n_features_ || ids.size() != labels.size()) {
    throw InvalidArgument("appended rows have inconsistent shape");
  }
  std::vector<double> all_features = features_;
  all_features.insert(all_features.end(), features.begin(), features.end());
  std::vector<Label> all_labels = labels_;
  all_labels.insert(all_labels.end(), labels.begin(), labels.end());
  std::vector<std::uint64_t> all_ids = ids_;
  all_ids.insert(all_ids.end(), ids.begin(), ids.end());
  return Dataset(std::move(all_features), n_features_, std::move(all_labels), feature_names_,
                 positive_class_name_, negative_class_name_, std::move(all_ids));
}

ImbalanceSummary summarize(const Dataset& d) {
  const std::size_t pos = d.count(Label::positive);
  const std::size_t neg = d.size() - pos;
  if (pos == 0 || neg == 0) throw InvalidArgument("dataset contains a single class");
  ImbalanceSummary s;
  s.n_instances = d.size();
  s.n_features = d.n_features();
  s.n_majority = std::max(pos, neg);
  s.n_minority = std::min(pos, neg);
  s.imbalance_ratio = static_cast<double>(s.n_majority) / static_cast<double>(s.n_minority);
  return s;
}

// ---------------------------------------------------------------------------
// KEEL

namespace {

struct KeelAttribute {
  std::string name;
  bool nominal = false;
  std::vector<std::string> values;
};

KeelAttribute parse_attribute(std::string_view rest, std::size_t line_no) {
  rest = trim(rest);
  KeelAttribute attr;
  std::size_t name_end = 0;
  if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
    name_end = rest.find(rest.front(), 1);
    if (name_end == std::string_view::npos) throw ParseError("unterminated attribute name", line_no);
    attr.name = std::string(rest.substr(1, name_end - 1));
    ++name_end;
  } else {
    name_end = rest.find_first_of(" \t{");
    if (name_end == std::string_view::npos) {
      throw ParseError("malformed header: attribute without a type", line_no);
    }
    attr.name = std::string(rest.substr(0, name_end));
  }
  if (attr.name.empty()) throw ParseError("malformed header: empty attribute name", line_no);

  std::string_view type = trim(rest.substr(name_end));
  if (type.empty()) throw ParseError("malformed header: attribute without a type", line_no);
  if (type.front() == '{') {
    const auto close = type.find('}');
    if (close == std::string_view::npos) throw ParseError("malformed header: unterminated '{'", line_no);
    attr.nominal = true;
    for (auto& v : split_list(type.substr(1, close - 1), ',')) {
      if (!v.empty()) attr.values.push_back(unquote(v));
    }
    if (attr.values.empty()) throw ParseError("malformed header: empty value set", line_no);
    return attr;
  }
  const auto type_end = type.find_first_of(" \t[");
  const std::string type_name = lower(type.substr(0, type_end));
  if (type_name != "real" && type_name != "integer" && type_name != "numeric") {
    throw ParseError("malformed header: unknown attribute type '" + type_name + "'", line_no);
  }
  return attr;
}

}  // namespace

Dataset parse_keel(std::istream& in) {
  std::vector<KeelAttribute> attributes;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  bool in_data = false;
  std::size_t data_line = 0;

  std::vector<std::size_t> input_columns;
  std::size_t output_column = 0;
  ClassTokens classes;
  std::vector<double> features;
  std::vector<std::string> row_classes;

  auto resolve_columns = [&]() {
    if (attributes.empty()) throw ParseError("malformed header: no attributes", data_line);
    auto find = [&](const std::string& name) -> std::size_t {
      for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (attributes[i].name == name) return i;
      }
      throw ParseError("malformed header: unknown attribute '" + name + "'", data_line);
    };
    if (outputs.size() > 1) throw ParseError("malformed header: more than one output", data_line);
    output_column = outputs.empty() ? attributes.size() - 1 : find(outputs.front());
    if (inputs.empty()) {
      for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (i != output_column) input_columns.push_back(i);
      }
    } else {
      for (const auto& name : inputs) input_columns.push_back(find(name));
    }
    if (input_columns.empty()) throw ParseError("malformed header: no input attributes", data_line);
    for (const std::size_t c : input_columns) {
      if (c == output_column) throw ParseError("malformed header: output listed as input", data_line);
      if (attributes[c].nominal) {
        throw ParseError("nominal input attribute '" + attributes[c].name + "' is not supported",
                         data_line);
      }
    }
    const auto& out_attr = attributes[output_column];
    if (out_attr.nominal) {
      if (out_attr.values.size() > 2) throw ParseError("more than two classes", data_line);
      for (const auto& v : out_attr.values) classes.declare(v);
    }
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;

    if (!in_data) {
      if (line.front() != '@') throw ParseError("malformed header: expected '@' keyword", line_no);
      if (starts_with_ci(line, "@relation")) continue;
      if (starts_with_ci(line, "@attribute")) {
        attributes.push_back(parse_attribute(line.substr(10), line_no));
      } else if (starts_with_ci(line, "@inputs") || starts_with_ci(line, "@input")) {
        const auto rest = line.substr(line.find_first_of(" \t") == std::string_view::npos
                                          ? line.size()
                                          : line.find_first_of(" \t"));
        for (auto& name : split_list(rest, ',')) {
          if (!name.empty()) inputs.push_back(unquote(name));
        }
      } else if (starts_with_ci(line, "@outputs") || starts_with_ci(line, "@output")) {
        const auto rest = line.substr(line.find_first_of(" \t") == std::string_view::npos
                                          ? line.size()
                                          : line.find_first_of(" \t"));
        for (auto& name : split_list(rest, ',')) {
          if (!name.empty()) outputs.push_back(unquote(name));
        }
      } else if (starts_with_ci(line, "@data")) {
        in_data = true;
        data_line = line_no;
        resolve_columns();
      } else {
        throw ParseError("malformed header: unknown keyword '" + std::string(line) + "'", line_no);
      }
      continue;
    }

    const auto tokens = split_list(line, ',');
    if (tokens.size() != attributes.size()) {
      throw ParseError("expected " + std::to_string(attributes.size()) + " values, found " +
                           std::to_string(tokens.size()),
                       line_no);
    }
    for (const std::size_t c : input_columns) {
      if (is_missing(tokens[c])) {
        throw ParseError("missing value for attribute '" + attributes[c].name + "'", line_no);
      }
      const auto v = to_double(tokens[c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("non-numeric value '" + tokens[c] + "' for attribute '" +
                             attributes[c].name + "'",
                         line_no);
      }
      features.push_back(*v);
    }
    const std::string cls = unquote(tokens[output_column]);
    if (is_missing(cls)) throw ParseError("missing class value", line_no);
    if (attributes[output_column].nominal) {
      if (!classes.counts.contains(cls)) throw ParseError("unknown class token '" + cls + "'", line_no);
    } else {
      classes.declare(cls);
      if (classes.order.size() > 2) throw ParseError("more than two classes", line_no);
    }
    ++classes.counts[cls];
    row_classes.push_back(cls);
  }

  if (!in_data) throw ParseError("missing @data section", line_no);
  if (row_classes.empty()) throw ParseError("empty data section", data_line);
  if (classes.order.size() < 2) {
    throw ParseError("class attribute declares fewer than two values", data_line);
  }

  // Minority class is positive; on equal counts a token literally named
  // "positive" wins, otherwise the second declared value.
  const std::string& a = classes.order[0];
  const std::string& b = classes.order[1];
  std::string positive;
  if (classes.counts[a] != classes.counts[b]) {
    positive = classes.counts[a] < classes.counts[b] ? a : b;
  } else {
    positive = (lower(a) == "positive") ? a : b;
  }
  const std::string negative = positive == a ? b : a;

  std::vector<Label> labels;
  labels.reserve(row_classes.size());
  for (const auto& cls : row_classes) {
    labels.push_back(cls == positive ? Label::positive : Label::negative);
  }
  std::vector<std::string> names;
  for (const std::size_t c : input_columns) names.push_back(attributes[c].name);
  return Dataset(std::move(features), input_columns.size(), std::move(labels), std::move(names),
                 positive, negative);
}

Dataset parse_keel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_keel(in);
}

// ---------------------------------------------------------------------------
// CSV

Dataset parse_csv(std::istream& in, const LabelColumn& label_column,
                  const std::string& positive_label) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!trim(raw).empty()) {
      header = split_csv_record(raw);
      break;
    }
  }
  if (header.empty()) throw ParseError("missing header row", line_no);

  std::size_t label_index = 0;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw ParseError("missing label column '" + *name + "'", line_no);
    label_index = static_cast<std::size_t>(it - header.begin());
  } else {
    label_index = std::get<std::size_t>(label_column);
    if (label_index >= header.size()) {
      throw ParseError("missing label column " + std::to_string(label_index), line_no);
    }
  }
  if (header.size() < 2) throw ParseError("CSV needs at least one feature column", line_no);

  std::vector<double> features;
  std::vector<std::string> row_classes;
  ClassTokens classes;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    const auto fields = split_csv_record(raw);
    if (fields.size() != header.size()) {
      throw ParseError("ragged row: expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_index) continue;
      if (is_missing(fields[c])) throw ParseError("missing value in column '" + header[c] + "'", line_no);
      const auto v = to_double(fields[c]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("non-numeric value '" + fields[c] + "' in column '" + header[c] + "'",
                         line_no);
      }
      features.push_back(*v);
    }
    const std::string& cls = fields[label_index];
    if (is_missing(cls)) throw ParseError("missing label", line_no);
    classes.declare(cls);
    if (classes.order.size() > 2) throw ParseError("more than two classes", line_no);
    ++classes.counts[cls];
    row_classes.push_back(cls);
  }
  if (row_classes.empty()) throw ParseError("empty data section", line_no);
  if (!classes.counts.contains(positive_label)) {
    throw ParseError("positive class absent: '" + positive_label + "' never occurs", 0);
  }
  std::string negative;
  for (const auto& cls : classes.order) {
    if (cls != positive_label) negative = cls;
  }

  std::vector<Label> labels;
  labels.reserve(row_classes.size());
  for (const auto& cls : row_classes) {
    labels.push_back(cls == positive_label ? Label::positive : Label::negative);
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_index) names.push_back(header[c]);
  }
  const std::size_t n_features = names.size();
  return Dataset(std::move(features), n_features, std::move(labels), std::move(names),
                 positive_label, negative);
}

Dataset parse_csv_file(const std::filesystem::path& path, const LabelColumn& label_column,
                       const std::string& positive_label) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_csv(in, label_column, positive_label);
}

void write_csv(const Dataset& d, std::ostream& out) {
  for (const auto& name : d.feature_names()) out << name << ',';
  out << "class\n";
  const std::string negative =
      d.negative_class_name().empty() ? std::string("negative") : d.negative_class_name();
  const std::string positive =
      d.positive_class_name().empty() ? std::string("positive") : d.positive_class_name();
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (const double v : d.row(i)) out << v << ',';
    out << (d.label(i) == Label::positive ? positive : negative) << '\n';
  }
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Splitting

void SplitPlan::validate(const Dataset& d) const {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw InvalidArgument("validation fraction must lie in (0, 1)");
  }
  if (folds < 2) throw InvalidArgument("folds must be at least 2");
  if (repeats < 1) throw InvalidArgument("repeats must be at least 1");
  const std::vector<std::size_t> holdout = stratified_holdout_indices(d.labels(), validation_fraction, seed);
  // Remaining rows must still support k folds per class.
  std::size_t pos = d.count(Label::positive);
  std::size_t neg = d.size() - pos;
  for (const std::size_t i : holdout) {
    (d.label(i) == Label::positive ? pos : neg) -= 1;
  }
  if (pos < folds || neg < folds) {
    throw InvalidArgument("a class has fewer than " + std::to_string(folds) +
                          " instances left after the validation holdout");
  }
}

std::vector<std::size_t> stratified_holdout_indices(std::span<const Label> labels, double fraction,
                                                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("holdout fraction must lie in (0, 1)");
  const std::size_t n = labels.size();
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  if (by_class[0].empty() || by_class[1].empty()) {
    throw InvalidArgument("holdout requires both classes");
  }

  const auto total = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  std::mt19937_64 rng(mix_seed(seed));

  // Largest remainder quotas; remainder ties resolved by a seeded order.
  std::array<std::size_t, 2> quota{};
  std::array<double, 2> remainder{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double exact = static_cast<double>(total) * static_cast<double>(by_class[c].size()) /
                         static_cast<double>(n);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  std::array<std::size_t, 2> order{0, 1};
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) quota[order[k % 2]] += 1;

  // Both sides of the split keep both classes.
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t other = 1 - c;
    if (quota[c] == 0 && quota[other] > 1) {
      quota[c] = 1;
      quota[other] -= 1;
    }
    if (quota[c] >= by_class[c].size() && quota[c] > 1) {
      quota[c] -= 1;
      quota[other] += 1;
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    if (quota[c] == 0 || quota[c] >= by_class[c].size()) {
      throw InvalidArgument("holdout fraction leaves a class empty on one side of the split");
    }
  }

  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < 2; ++c) {
    auto members = by_class[c];
    std::shuffle(members.begin(), members.end(), rng);
    chosen.insert(chosen.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Partition stratified_holdout(const Dataset& d, double fraction, std::uint64_t seed) {
  const auto holdout = stratified_holdout_indices(d.labels(), fraction, seed);
  std::vector<std::size_t> rest;
  rest.reserve(d.size() - holdout.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (h < holdout.size() && holdout[h] == i) {
      ++h;
    } else {
      rest.push_back(i);
    }
  }
  return {d.subset(rest), d.subset(holdout)};
}

std::vector<std::size_t> stratified_fold_assignment(std::span<const Label> labels, std::size_t k,
                                                    std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  std::mt19937_64 rng(mix_seed(seed));
  std::size_t offset = static_cast<std::size_t>(rng() % k);
  std::vector<std::size_t> fold(labels.size(), 0);
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < members.size(); ++j) fold[members[j]] = (offset + j) % k;
    offset = (offset + members.size()) % k;
  }
  return fold;
}

std::vector<Partition> stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed) {
  const auto fold = stratified_fold_assignment(d.labels(), k, seed);
  std::vector<Partition> out;
  out.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < d.size(); ++i) (fold[i] == f ? test : train).push_back(i);
    out.push_back({d.subset(train), d.subset(test)});
  }
  return out;
}

}  // namespace meboost
