#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

namespace fridge {

/// Design matrix, response, and the centering/scaling transform needed to
/// map standardized-scale fits back to the raw scale.
///
/// When standardized is true, every column of x has mean 0 and unit 1/n
/// second moment, and y has mean 0. Scaling uses the 1/n second moment
/// (not the 1/(n-1) SD) so that (1/n) sum_i x_ij^2 == 1 exactly, which is
/// what reduces the coordinate-descent denominator to one.
struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;
  Eigen::VectorXd center_x;  ///< column means removed (size p when standardized)
  Eigen::VectorXd scale_x;   ///< strictly positive column scales
  double center_y = 0.0;
  bool standardized = false;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }
};

/// Loads a numeric CSV with a header row. The response column is removed
/// from the design matrix and becomes y; remaining column order is
/// preserved. Non-numeric or blank cells raise ParseError with the cell
/// location; a missing response column raises SchemaError.
Dataset load_csv(const std::filesystem::path& path,
                 const std::string& response_column);
Dataset load_csv(const std::filesystem::path& path,
                 Eigen::Index response_index);

/// Writes the dataset as CSV (predictor columns then a final y column),
/// with full round-trip precision.
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Centers and scales columns to unit 1/n second moment and centers y,
/// recording the transform. A constant column raises DegenerateInputError
/// naming the column.
Dataset standardize(const Dataset& data);

/// Maps standardized-scale coefficients back to the raw scale:
/// raw_j = std_j / scale_j.
Eigen::VectorXd raw_coefficients(const Dataset& std_data,
                                 const Eigen::VectorXd& std_beta);

/// Intercept of the raw-scale model corresponding to standardized-scale
/// coefficients: center_y - sum_j raw_j * center_j.
double raw_intercept(const Dataset& std_data, const Eigen::VectorXd& std_beta);

/// Builds an in-memory dataset from a matrix and response (names x1..xp
/// unless given).
Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y,
                     std::vector<std::string> column_names = {});

}  // namespace fridge
