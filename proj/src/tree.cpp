#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <cctype>
#include <sstream>

#include "adaptida/learner.hpp"

namespace adaptida {
namespace {

constexpr int kArchitectureAttribute = static_cast<int>(ProblemFeatures::kCount);
constexpr double kEps = 1e-12;

double entropy(const std::vector<double>& counts, double total) {
    double h = 0.0;
    for (const double c : counts)
        if (c > 0.0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    return h;
}

struct Candidate {
    int attribute = -1;
    double gain = 0.0;
    double ratio = 0.0;
    double threshold = 0.0;
    std::string architecture;
};

class Inducer {
public:
    Inducer(const Dataset& data, int min_cases) : data_(data), min_cases_(min_cases) {
        labels_ = data.labels();
        for (std::size_t i = 0; i < labels_.size(); ++i)
            label_index_[labels_[i]] = static_cast<int>(i);
    }

    DecisionTree run() {
        std::vector<std::size_t> rows(data_.cases.size());
        std::iota(rows.begin(), rows.end(), 0);
        build(rows);
        return DecisionTree(std::move(nodes_));
    }

private:
    int label_of(std::size_t row) const { return label_index_.at(data_.cases[row].label); }

    std::vector<double> counts(const std::vector<std::size_t>& rows) const {
        std::vector<double> c(labels_.size(), 0.0);
        for (const auto r : rows)
            c[static_cast<std::size_t>(label_of(r))] += 1.0;
        return c;
    }

    bool branch_ok(std::size_t left, std::size_t total) const {
        const auto m = static_cast<std::size_t>(std::max(min_cases_, 1));
        return left >= m && total - left >= m;
    }

    // Scores a binary partition given the label counts of the left side.
    void score(const std::vector<double>& total, double n, double base,
               const std::vector<double>& left, double nl, Candidate& c) const {
        std::vector<double> right(total.size());
        for (std::size_t i = 0; i < total.size(); ++i)
            right[i] = total[i] - left[i];
        const double nr = n - nl;
        c.gain = base - (nl / n) * entropy(left, nl) - (nr / n) * entropy(right, nr);
        const double split = -(nl / n) * std::log2(nl / n) - (nr / n) * std::log2(nr / n);
        c.ratio = split > 0.0 ? c.gain / split : 0.0;
    }

    std::vector<Candidate> candidates(const std::vector<std::size_t>& rows) const {
        const auto total = counts(rows);
        const double n = static_cast<double>(rows.size());
        const double base = entropy(total, n);
        std::vector<Candidate> out;

        for (int f = 0; f < kArchitectureAttribute; ++f) {
            std::vector<std::pair<double, int>> vals;
            for (const auto r : rows)
                vals.emplace_back(data_.cases[r].features.values()[static_cast<std::size_t>(f)], label_of(r));
            std::sort(vals.begin(), vals.end());
            std::vector<double> left(labels_.size(), 0.0);
            Candidate best;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left[static_cast<std::size_t>(vals[i].second)] += 1.0;
                if (vals[i].first == vals[i + 1].first)
                    continue;
                // Each side of a test must keep at least min_cases cases.
                if (!branch_ok(i + 1, vals.size()))
                    continue;
                Candidate c;
                c.attribute = f;
                score(total, n, base, left, static_cast<double>(i + 1), c);
                double mid = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
                if (mid >= vals[i + 1].first)
                    mid = vals[i].first;
                c.threshold = mid;
                if (best.attribute < 0 || c.gain > best.gain + kEps)
                    best = c;
            }
            if (best.attribute >= 0 && best.gain > kEps)
                out.push_back(best);
        }

        std::set<std::string> archs;
        for (const auto r : rows)
            archs.insert(data_.cases[r].architecture);
        if (archs.size() > 1) {
            Candidate best;
            for (const auto& a : archs) {
                std::vector<double> left(labels_.size(), 0.0);
                double nl = 0.0;
                for (const auto r : rows)
                    if (data_.cases[r].architecture == a) {
                        left[static_cast<std::size_t>(label_of(r))] += 1.0;
                        nl += 1.0;
                    }
                if (!branch_ok(static_cast<std::size_t>(nl), rows.size()))
                    continue;
                Candidate c;
                c.attribute = kArchitectureAttribute;
                c.architecture = a;
                score(total, n, base, left, nl, c);
                if (best.attribute < 0 || c.gain > best.gain + kEps)
                    best = c;
            }
            if (best.gain > kEps)
                out.push_back(best);
        }
        return out;
    }

    int make_leaf(const std::vector<std::size_t>& rows) {
        const auto c = counts(rows);
        std::size_t best = 0;
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i] > c[best])
                best = i;
        DecisionTree::Node node;
        node.kind = DecisionTree::Node::Kind::Leaf;
        node.label = labels_.empty() ? std::string() : labels_[best];
        node.cases = static_cast<double>(rows.size());
        node.errors = node.cases - (c.empty() ? 0.0 : c[best]);
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size() - 1);
    }

    int build(const std::vector<std::size_t>& rows) {
        const auto c = counts(rows);
        const bool pure = std::count_if(c.begin(), c.end(), [](double x) { return x > 0.0; }) <= 1;
        if (pure || static_cast<int>(rows.size()) < min_cases_)
            return make_leaf(rows);
        const auto cands = candidates(rows);
        if (cands.empty())
            return make_leaf(rows);

        // Only tests with at least average gain compete on gain ratio.
        double mean_gain = 0.0;
        for (const auto& cand : cands)
            mean_gain += cand.gain;
        mean_gain /= static_cast<double>(cands.size());
        const Candidate* chosen = nullptr;
        for (const auto& cand : cands) {
            if (cand.gain + kEps < mean_gain)
                continue;
            if (!chosen || cand.ratio > chosen->ratio + kEps)
                chosen = &cand;
        }

        std::vector<std::size_t> left, right;
        for (const auto r : rows) {
            const auto& tc = data_.cases[r];
            const bool goes_left = chosen->attribute == kArchitectureAttribute
                                       ? tc.architecture == chosen->architecture
                                       : tc.features.values()[static_cast<std::size_t>(chosen->attribute)] <=
                                             chosen->threshold;
            (goes_left ? left : right).push_back(r);
        }

        DecisionTree::Node node;
        if (chosen->attribute == kArchitectureAttribute) {
            node.kind = DecisionTree::Node::Kind::Architecture;
            node.architecture = chosen->architecture;
        } else {
            node.kind = DecisionTree::Node::Kind::Numeric;
            node.feature = chosen->attribute;
            node.threshold = chosen->threshold;
        }
        node.cases = static_cast<double>(rows.size());
        const auto maj = *std::max_element(c.begin(), c.end());
        node.errors = node.cases - maj;
        nodes_.push_back(node);
        const auto self = nodes_.size() - 1;
        const int l = build(left);
        const int r = build(right);
        nodes_[self].left = l;
        nodes_[self].right = r;
        return static_cast<int>(self);
    }

    const Dataset& data_;
    int min_cases_;
    std::vector<std::string> labels_;
    std::map<std::string, int> label_index_;
    std::vector<DecisionTree::Node> nodes_;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_node(const std::vector<DecisionTree::Node>& nodes, int i, int indent, std::string& out) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    using Kind = DecisionTree::Node::Kind;
    if (n.kind == Kind::Leaf) {
        out += "(leaf " + quote(n.label) + " " + number(n.cases) + " " + number(n.errors) + ")";
        return;
    }
    if (n.kind == Kind::Numeric)
        out += std::string("(le ") + ProblemFeatures::names()[static_cast<std::size_t>(n.feature)] + " " +
               number(n.threshold);
    else
        out += "(arch " + quote(n.architecture);
    out += " " + number(n.cases) + " " + number(n.errors) + "\n";
    write_node(nodes, n.left, indent + 1, out);
    out += "\n";
    write_node(nodes, n.right, indent + 1, out);
    out += ")";
}

class Reader {
public:
    explicit Reader(const std::string& text) : s_(text) {}

    int node(std::vector<DecisionTree::Node>& nodes) {
        expect('(');
        const std::string kind = atom();
        DecisionTree::Node n;
        using Kind = DecisionTree::Node::Kind;
        if (kind == "leaf") {
            n.kind = Kind::Leaf;
            n.label = string();
            n.cases = num();
            n.errors = num();
            expect(')');
            nodes.push_back(n);
            return static_cast<int>(nodes.size() - 1);
        }
        if (kind == "le") {
            n.kind = Kind::Numeric;
            const std::string name = atom();
            const auto& names = ProblemFeatures::names();
            auto it = std::find_if(names.begin(), names.end(), [&](const char* x) { return name == x; });
            if (it == names.end())
                throw DataError("model refers to unknown feature '" + name + "'");
            n.feature = static_cast<int>(it - names.begin());
            n.threshold = num();
        } else if (kind == "arch") {
            n.kind = Kind::Architecture;
            n.architecture = string();
        } else {
            throw DataError("unknown model node '" + kind + "'");
        }
        n.cases = num();
        n.errors = num();
        nodes.push_back(n);
        const auto self = nodes.size() - 1;
        const int l = node(nodes);
        const int r = node(nodes);
        nodes[self].left = l;
        nodes[self].right = r;
        expect(')');
        return static_cast<int>(self);
    }

    void finish() {
        skip();
        if (pos_ != s_.size())
            throw DataError("trailing text after model");
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    void expect(char c) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw DataError(std::string("malformed model: expected '") + c + "'");
        ++pos_;
    }
    std::string atom() {
        skip();
        const auto start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')')
            ++pos_;
        if (start == pos_)
            throw DataError("malformed model: expected a token");
        return s_.substr(start, pos_ - start);
    }
    std::string string() {
        expect('"');
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size())
                ++pos_;
            out += s_[pos_++];
        }
        expect('"');
        return out;
    }
    double num() {
        const std::string a = atom();
        char* end = nullptr;
        const double v = std::strtod(a.c_str(), &end);
        if (end != a.c_str() + a.size())
            throw DataError("malformed model number '" + a + "'");
        return v;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                  [](const Node& n) { return n.kind == Node::Kind::Leaf; }));
}

int DecisionTree::depth() const {
    if (nodes_.empty())
        return 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int best = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        const auto& n = nodes_[static_cast<std::size_t>(i)];
        if (n.kind != Node::Kind::Leaf) {
            stack.emplace_back(n.left, d + 1);
            stack.emplace_back(n.right, d + 1);
        }
    }
    return best;
}

const std::string& DecisionTree::classify(const ProblemFeatures& f, const std::string& architecture) const {
    if (nodes_.empty())
        throw DataError("cannot classify with an empty tree");
    const auto values = f.values();
    const Node* n = &nodes_[0];
    while (n->kind != Node::Kind::Leaf) {
        const bool left = n->kind == Node::Kind::Architecture
                              ? architecture == n->architecture
                              : values[static_cast<std::size_t>(n->feature)] <= n->threshold;
        n = &nodes_[static_cast<std::size_t>(left ? n->left : n->right)];
    }
    return n->label;
}

std::string DecisionTree::serialize() const {
    if (nodes_.empty())
        throw DataError("cannot serialize an empty tree");
    std::string out;
    write_node(nodes_, 0, 0, out);
    return out + "\n";
}

DecisionTree DecisionTree::parse(const std::string& text) {
    std::vector<Node> nodes;
    Reader reader(text);
    reader.node(nodes);
    reader.finish();
    return DecisionTree(std::move(nodes));
}

DecisionTree induce_tree(const Dataset& data, int min_cases) {
    if (data.cases.empty())
        throw DataError("cannot induce a tree from an empty dataset");
    return Inducer(data, min_cases).run();
}

CrossValidation cross_validate(const Dataset& data, int folds, std::uint64_t seed, int min_cases) {
    const std::size_t n = data.cases.size();
    if (folds < 2 || static_cast<std::size_t>(folds) > n)
        throw DataError("need 2 <= folds <= cases (" + std::to_string(folds) + " folds, " +
                        std::to_string(n) + " cases)");
    const auto labels = data.labels();
    CrossValidation cv;
    cv.methods = {"tree", "majority"};
    for (const auto& l : labels)
        cv.methods.push_back("fixed:" + l);
    cv.fold_errors.assign(cv.methods.size(), {});

    const auto order = shuffled_indices(n, seed);
    const std::size_t k = static_cast<std::size_t>(folds);
    std::size_t start = 0;
    for (std::size_t fold = 0; fold < k; ++fold) {
        const std::size_t size = n / k + (fold < n % k ? 1 : 0);
        Dataset train{data.axis, {}};
        std::vector<const TrainingCase*> test;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& c = data.cases[order[i]];
            if (i >= start && i < start + size)
                test.push_back(&c);
            else
                train.cases.push_back(c);
        }
        start += size;

        const DecisionTree tree = induce_tree(train, min_cases);
        std::map<std::string, int> freq;
        for (const auto& c : train.cases)
            ++freq[c.label];
        std::string majority;
        int best = -1;
        for (const auto& l : labels)
            if (freq[l] > best) {
                best = freq[l];
                majority = l;
            }

        const double m = static_cast<double>(test.size());
        double tree_err = 0, maj_err = 0;
        std::vector<double> fixed_err(labels.size(), 0.0);
        for (const auto* c : test) {
            tree_err += tree.classify(c->features, c->architecture) != c->label;
            maj_err += majority != c->label;
            for (std::size_t j = 0; j < labels.size(); ++j)
                fixed_err[j] += labels[j] != c->label;
        }
        cv.fold_errors[0].push_back(tree_err / m);
        cv.fold_errors[1].push_back(maj_err / m);
        for (std::size_t j = 0; j < labels.size(); ++j)
            cv.fold_errors[2 + j].push_back(fixed_err[j] / m);
    }
    for (const auto& errs : cv.fold_errors)
        cv.mean_error.push_back(std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size()));
    return cv;
}

}  // namespace adaptida
