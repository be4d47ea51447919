#include "fridge/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fridge/errors.hpp"

namespace fridge {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace and a possible trailing CR
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string()
                                           : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col,
                  const std::string& col_name) {
  if (cell.empty()) {
    throw ParseError("blank cell at row " + std::to_string(row) + ", column '" +
                     col_name + "' (index " + std::to_string(col) + ")");
  }
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("non-numeric cell '" + cell + "' at row " +
                     std::to_string(row) + ", column '" + col_name +
                     "' (index " + std::to_string(col) + ")");
  }
  return value;
}

Dataset load_csv_impl(const std::filesystem::path& path,
                      Eigen::Index response_index,
                      const std::string* response_name) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("'" + path.string() + "' is empty (header row required)");
  }
  const std::vector<std::string> header = split_csv_line(line);
  const Eigen::Index n_cols = static_cast<Eigen::Index>(header.size());
  if (n_cols < 2) {
    throw SchemaError("'" + path.string() +
                      "' must have at least one predictor and a response");
  }

  Eigen::Index resp = response_index;
  if (response_name != nullptr) {
    resp = -1;
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      if (header[c] == *response_name) {
        resp = c;
        break;
      }
    }
    if (resp < 0) {
      throw SchemaError("response column '" + *response_name +
                        "' not found in '" + path.string() + "'");
    }
  }
  if (resp < 0 || resp >= n_cols) {
    throw SchemaError("response column index " + std::to_string(resp) +
                      " out of range for " + std::to_string(n_cols) +
                      " columns");
  }

  std::vector<std::vector<double>> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != n_cols) {
      throw ParseError("row " + std::to_string(row_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(n_cols));
    }
    std::vector<double> vals(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      vals[c] = parse_cell(cells[c], row_no, c, header[c]);
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) {
    throw SchemaError("'" + path.string() + "' has no data rows");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = n_cols - 1;
  Dataset data;
  data.x.resize(n, p);
  data.y.resize(n);
  data.column_names.reserve(p);
  for (Eigen::Index c = 0; c < n_cols; ++c) {
    if (c != resp) data.column_names.push_back(header[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index k = 0;
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      if (c == resp) {
        data.y[i] = rows[i][c];
      } else {
        data.x(i, k++) = rows[i][c];
      }
    }
  }
  return data;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path,
                 const std::string& response_column) {
  return load_csv_impl(path, -1, &response_column);
}

Dataset load_csv(const std::filesystem::path& path,
                 Eigen::Index response_index) {
  return load_csv_impl(path, response_index, nullptr);
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw SchemaError("cannot write '" + path.string() + "'");
  }
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  for (Eigen::Index j = 0; j < p; ++j) {
    const std::string name = j < static_cast<Eigen::Index>(data.column_names.size())
                                 ? data.column_names[j]
                                 : "x" + std::to_string(j + 1);
    out << name << ',';
  }
  out << "y\n";
  char buf[40];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.x(i, j));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.y[i]);
    out << buf << '\n';
  }
}

Dataset standardize(const Dataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (n < 2) {
    throw InvalidInputError("standardization needs at least 2 rows");
  }
  Dataset out = data;
  out.center_x.resize(p);
  out.scale_x.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = data.x.col(j).mean();
    out.center_x[j] = mean;
    out.x.col(j).array() -= mean;
    const double second_moment = out.x.col(j).squaredNorm() / static_cast<double>(n);
    if (!(second_moment > 0.0)) {
      const std::string name =
          j < static_cast<Eigen::Index>(data.column_names.size())
              ? data.column_names[j]
              : "x" + std::to_string(j + 1);
      throw DegenerateInputError("column '" + name + "' is constant");
    }
    const double scale = std::sqrt(second_moment);
    out.scale_x[j] = scale;
    out.x.col(j) /= scale;
  }
  out.center_y = data.y.mean();
  out.y.array() -= out.center_y;
  out.standardized = true;
  return out;
}

Eigen::VectorXd raw_coefficients(const Dataset& std_data,
                                 const Eigen::VectorXd& std_beta) {
  if (!std_data.standardized) {
    throw InvalidInputError("raw_coefficients requires a standardized dataset");
  }
  return std_beta.cwiseQuotient(std_data.scale_x);
}

double raw_intercept(const Dataset& std_data, const Eigen::VectorXd& std_beta) {
  const Eigen::VectorXd raw = raw_coefficients(std_data, std_beta);
  return std_data.center_y - raw.dot(std_data.center_x);
}

Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y,
                     std::vector<std::string> column_names) {
  if (x.rows() != y.size()) {
    throw InvalidInputError("x and y row counts differ");
  }
  Dataset data;
  data.x = std::move(x);
  data.y = std::move(y);
  if (column_names.empty()) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
      column_names.push_back("x" + std::to_string(j + 1));
    }
  }
  data.column_names = std::move(column_names);
  return data;
}

}  // namespace fridge
