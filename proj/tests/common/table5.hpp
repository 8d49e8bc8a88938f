#pragma once

#include <array>
#include <string_view>

namespace table5 {

struct Row {
  std::string_view label;
  double accuracy;
  double precision;
  double recall;
  double f1;
};

// Published classification results, three decimals as printed.
inline constexpr std::array<Row, 35> kRows{{
    {"LR", 0.877, 0.421, 0.003, 0.006},
    {"LR + SMOTE", 0.655, 0.215, 0.685, 0.327},
    {"LR + ADASYN", 0.646, 0.212, 0.694, 0.325},
    {"LR + SMOTE-TL", 0.661, 0.217, 0.676, 0.328},
    {"LR + SMOTE-ENN", 0.625, 0.204, 0.711, 0.317},
    {"KNN", 0.889, 0.639, 0.208, 0.314},
    {"KNN + SMOTE", 0.763, 0.296, 0.678, 0.412},
    {"KNN + ADASYN", 0.730, 0.272, 0.721, 0.395},
    {"KNN + SMOTE-TL", 0.763, 0.297, 0.685, 0.414},
    {"KNN + SMOTE-ENN", 0.725, 0.273, 0.750, 0.400},
    {"SVM", 0.891, 0.716, 0.185, 0.294},
    {"SVM + SMOTE", 0.766, 0.308, 0.729, 0.433},
    {"SVM + ADASYN", 0.722, 0.276, 0.785, 0.409},
    {"SVM + SMOTE-TL", 0.766, 0.307, 0.727, 0.432},
    {"SVM + SMOTE-ENN", 0.737, 0.287, 0.775, 0.419},
    {"ANN", 0.890, 0.638, 0.227, 0.335},
    {"ANN + SMOTE", 0.765, 0.308, 0.735, 0.434},
    {"ANN + ADASYN", 0.703, 0.267, 0.814, 0.402},
    {"ANN + SMOTE-TL", 0.757, 0.300, 0.744, 0.428},
    {"ANN + SMOTE-ENN", 0.730, 0.283, 0.784, 0.416},
    {"NB", 0.884, 0.672, 0.096, 0.168},
    {"NB + SMOTE", 0.641, 0.208, 0.690, 0.320},
    {"NB + ADASYN", 0.599, 0.196, 0.736, 0.310},
    {"NB + SMOTE-TL", 0.641, 0.208, 0.691, 0.320},
    {"NB + SMOTE-ENN", 0.590, 0.194, 0.743, 0.307},
    {"RF", 0.895, 0.686, 0.262, 0.379},
    {"RF + SMOTE", 0.851, 0.415, 0.528, 0.465},
    {"RF + ADASYN", 0.844, 0.401, 0.551, 0.464},
    {"RF + SMOTE-TL", 0.848, 0.408, 0.537, 0.463},
    {"RF + SMOTE-ENN", 0.809, 0.351, 0.664, 0.459},
    {"XGBoost", 0.892, 0.648, 0.255, 0.366},
    {"XGBoost + SMOTE", 0.826, 0.368, 0.593, 0.454},
    {"XGBoost + ADASYN", 0.811, 0.347, 0.615, 0.444},
    {"XGBoost + SMOTE-TL", 0.825, 0.369, 0.609, 0.459},
    {"XGBoost + SMOTE-ENN", 0.791, 0.332, 0.699, 0.450},
}};

// KILL and NO KILL sample counts of the published dataset.
inline constexpr long kKill = 18397;
inline constexpr long kNoKill = 135209;

}  // namespace table5
