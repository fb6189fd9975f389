#include "minirel/synthetic.hpp"

#include <cmath>
#include <string>

#include "minirel/rng.hpp"

namespace minirel {

RawTable synthetic_census(std::size_t rows, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xce4515ULL));
  const std::vector<std::string> education{"HS-grad",   "Some-college", "Bachelors",
                                           "Masters",   "Assoc-voc",    "Doctorate",
                                           "11th",      "7th-8th"};
  const std::vector<std::string> marital{"Married", "Never-married", "Divorced", "Widowed",
                                         "Separated"};
  const std::vector<std::string> occupation{"Tech-support", "Craft-repair", "Sales",
                                            "Exec-managerial", "Prof-specialty",
                                            "Handlers-cleaners", "Machine-op-inspct",
                                            "Adm-clerical", "Farming-fishing", "Other-service"};

  std::vector<std::vector<std::string>> data;
  data.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    // the minority label is drawn independently of every feature, so no
    // region of feature space concentrates it
    const bool minority = rng.uniform01() < 0.15;
    const double age = 17.0 + 73.0 * std::pow(rng.uniform01(), 1.3);
    const double hours = std::min(99.0, std::max(1.0, 40.0 + 12.0 * (rng.uniform01() +
                                                                     rng.uniform01() - 1.0)));
    const double eduyears = 1.0 + rng.bounded(16);
    const double gain = rng.uniform01() < 0.08 ? 1000.0 * (1 + rng.bounded(90)) : 0.0;
    std::vector<std::string> row;
    row.push_back(std::to_string(static_cast<int>(age)));
    row.push_back(education[rng.bounded(education.size())]);
    row.push_back(std::to_string(static_cast<int>(eduyears)));
    row.push_back(marital[rng.bounded(marital.size())]);
    row.push_back(occupation[rng.bounded(occupation.size())]);
    row.push_back(minority ? "Nonwhite" : "White");
    row.push_back(std::to_string(static_cast<int>(hours)));
    row.push_back(std::to_string(static_cast<int>(gain)));
    row.push_back(rng.uniform01() < 0.24 ? ">50K" : "<=50K");
    data.push_back(std::move(row));
  }
  Schema schema;
  schema.sensitive_column = "race";
  schema.target_column = "income";
  return make_table({"age", "education", "education_num", "marital_status", "occupation", "race",
                     "hours_per_week", "capital_gain", "income"},
                    std::move(data), schema);
}

RawTable synthetic_blobs(std::size_t rows_per_blob, int blobs, int dim, double separation,
                         std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xb10b5ULL));
  std::vector<std::vector<std::string>> data;
  for (int b = 0; b < blobs; ++b) {
    for (std::size_t i = 0; i < rows_per_blob; ++i) {
      std::vector<std::string> row;
      for (int d = 0; d < dim; ++d) {
        const double base = (d == 0) ? separation * b : 0.0;
        // sum of three uniforms approximates a gaussian well enough here
        const double noise = rng.uniform01() + rng.uniform01() + rng.uniform01() - 1.5;
        row.push_back(std::to_string(base + noise));
      }
      row.push_back("blob" + std::to_string(b));
      data.push_back(std::move(row));
    }
  }
  std::vector<std::string> columns;
  for (int d = 0; d < dim; ++d) columns.push_back("x" + std::to_string(d));
  columns.push_back("blob");
  Schema schema;
  schema.sensitive_column = "blob";
  return make_table(std::move(columns), std::move(data), schema);
}

}  // namespace minirel
