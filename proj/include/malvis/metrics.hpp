#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "malvis/error.hpp"
#include "malvis/format.hpp"

namespace malvis {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> counts;  // n x n, row-major

  explicit ConfusionMatrix(std::size_t classes = 0) : n(classes), counts(classes * classes, 0) {}

  std::size_t& at(std::size_t t, std::size_t p) { return counts[t * n + p]; }
  std::size_t at(std::size_t t, std::size_t p) const { return counts[t * n + p]; }

  std::size_t total() const {
    std::size_t s = 0;
    for (auto c : counts) s += c;
    return s;
  }
  std::size_t trace() const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += at(i, i);
    return s;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion_matrix(std::span<const std::size_t> labels, std::span<const std::size_t> preds,
                                        std::size_t n) {
  if (labels.size() != preds.size())
    throw Error("confusion matrix: " + std::to_string(labels.size()) + " labels but " + std::to_string(preds.size()) +
                " predictions");
  ConfusionMatrix cm(n);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n || preds[i] >= n)
      throw Error("confusion matrix: class index out of range at sample " + std::to_string(i));
    ++cm.at(labels[i], preds[i]);
  }
  return cm;
}

struct ClassificationMetrics {
  double accuracy = 0.0;
  double precision = 0.0;  // macro
  double recall = 0.0;     // macro
  double f1 = 0.0;         // macro mean of per-class F1
  std::vector<double> class_precision;
  std::vector<double> class_recall;
  std::vector<double> class_f1;
};

/// Accuracy plus macro-averaged one-vs-rest precision, recall and F1.
/// Undefined ratios (no predicted or no actual positives) count as 0.
inline ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (cm.n == 0 || total == 0) throw Error("classification metrics need a non-empty confusion matrix");

  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };

  ClassificationMetrics m;
  m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  for (std::size_t k = 0; k < cm.n; ++k) {
    double predicted = 0.0, actual = 0.0;
    for (std::size_t j = 0; j < cm.n; ++j) {
      predicted += static_cast<double>(cm.at(j, k));
      actual += static_cast<double>(cm.at(k, j));
    }
    const double tp = static_cast<double>(cm.at(k, k));
    const double p = ratio(tp, predicted);
    const double r = ratio(tp, actual);
    m.class_precision.push_back(p);
    m.class_recall.push_back(r);
    m.class_f1.push_back(ratio(2.0 * p * r, p + r));
  }
  for (std::size_t k = 0; k < cm.n; ++k) {
    m.precision += m.class_precision[k];
    m.recall += m.class_recall[k];
    m.f1 += m.class_f1[k];
  }
  const double n = static_cast<double>(cm.n);
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

/// Metrics JSON with 4 decimal places.
inline std::string to_json(const ClassificationMetrics& m, std::span<const std::string> class_names = {}) {
  std::string out = "{\n";
  out += "  \"accuracy\": " + fixed(m.accuracy, 4) + ",\n";
  out += "  \"precision\": " + fixed(m.precision, 4) + ",\n";
  out += "  \"recall\": " + fixed(m.recall, 4) + ",\n";
  out += "  \"f1\": " + fixed(m.f1, 4);
  if (!class_names.empty() && class_names.size() == m.class_f1.size()) {
    out += ",\n  \"classes\": {";
    for (std::size_t k = 0; k < class_names.size(); ++k) {
      out += k == 0 ? "\n" : ",\n";
      out += "    " + nlohmann::json(class_names[k]).dump() + ": {\"precision\": " + fixed(m.class_precision[k], 4) +
             ", \"recall\": " + fixed(m.class_recall[k], 4) + ", \"f1\": " + fixed(m.class_f1[k], 4) + "}";
    }
    out += "\n  }";
  }
  out += "\n}\n";
  return out;
}

namespace csv_detail {

inline std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace csv_detail

/// CSV with a header row of class labels; each data row starts with its true label.
inline std::string to_csv(const ConfusionMatrix& cm, std::span<const std::string> class_names) {
  if (class_names.size() != cm.n) throw Error("confusion matrix CSV: class name count does not match matrix size");
  std::string out = "label";
  for (const auto& name : class_names) out += "," + csv_detail::quote(name);
  out += "\n";
  for (std::size_t t = 0; t < cm.n; ++t) {
    out += csv_detail::quote(class_names[t]);
    for (std::size_t p = 0; p < cm.n; ++p) out += "," + std::to_string(cm.at(t, p));
    out += "\n";
  }
  return out;
}

}  // namespace malvis
