#include "xbarvmm/dataset.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "xbarvmm/errors.hpp"

namespace xbarvmm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_real(const std::string& s, int line_no, int col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError("wdbc line " + std::to_string(line_no) + ": column " +
                        std::to_string(col + 1) + " is not a real number: '" + s + "'");
    }
}

}  // namespace

Dataset load_wdbc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);

    std::vector<std::array<double, kWdbcFeatures>> rows;
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != 2 + kWdbcFeatures)
            throw DataError("wdbc line " + std::to_string(line_no) + ": expected " +
                            std::to_string(2 + kWdbcFeatures) + " columns, got " +
                            std::to_string(fields.size()));
        const std::string& diag = fields[1];
        int label;
        if (diag == "M")
            label = 1;
        else if (diag == "B")
            label = 0;
        else
            throw DataError("wdbc line " + std::to_string(line_no) +
                            ": unknown diagnosis code '" + diag + "'");
        std::array<double, kWdbcFeatures> feats{};
        for (int f = 0; f < kWdbcFeatures; ++f)
            feats[f] = parse_real(fields[2 + f], line_no, 2 + f);
        rows.push_back(feats);
        labels.push_back(label);
    }
    if (rows.empty()) throw DataError("dataset file is empty: " + path);

    Dataset data;
    data.features = Matrix(static_cast<int>(rows.size()), kWdbcFeatures);
    for (std::size_t s = 0; s < rows.size(); ++s)
        for (int f = 0; f < kWdbcFeatures; ++f)
            data.features(static_cast<int>(s), f) = rows[s][f];
    data.labels = std::move(labels);

    if (data.samples() == kWdbcSamples) {
        const int malignant = std::accumulate(data.labels.begin(), data.labels.end(), 0);
        const int benign = data.samples() - malignant;
        if (benign != kWdbcBenign || malignant != kWdbcMalignant)
            throw DataError("canonical wdbc class counts mismatch: got " +
                            std::to_string(benign) + " B / " + std::to_string(malignant) +
                            " M, expected 357 B / 212 M");
    }
    return data;
}

Split split_dataset(const Dataset& data, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ParamError("split fraction must be in (0, 1)");

    std::vector<int> order(data.samples());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    const int n_train = static_cast<int>(fraction * data.samples());
    const int n_test = data.samples() - n_train;

    Split split;
    split.train.features = Matrix(n_train, data.feature_count());
    split.test.features = Matrix(n_test, data.feature_count());
    split.train.labels.resize(n_train);
    split.test.labels.resize(n_test);
    for (int i = 0; i < data.samples(); ++i) {
        const int src = order[i];
        Dataset& dst = i < n_train ? split.train : split.test;
        const int row = i < n_train ? i : i - n_train;
        for (int f = 0; f < data.feature_count(); ++f)
            dst.features(row, f) = data.features(src, f);
        dst.labels[row] = data.labels[src];
    }
    return split;
}

}  // namespace xbarvmm
