#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace segmetrics {

// Domain error hierarchy. Everything thrown by the library derives from
// Error so CLI code can map failures to exit codes in one place.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroContacts : Error {
    ZeroContacts() : Error("contact profile has zero contacts") {}
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct MissingOwnGroup : Error {
    MissingOwnGroup() : Error("individual has no own-group label") {}
};
struct MixedGroups : Error {
    using Error::Error;
};
struct DegenerateGroups : Error {
    using Error::Error;
};
struct IsolatedGroup : Error {
    using Error::Error;
};
struct UnlabeledEndpoint : Error {
    using Error::Error;
};
struct EmptyGraph : Error {
    EmptyGraph() : Error("graph has no edges") {}
};
struct EmptyGroup : Error {
    using Error::Error;
};
struct UnsupportedDimension : Error {
    using Error::Error;
};
struct AgeOutOfRange : Error {
    using Error::Error;
};
struct ZeroPercentage : Error {
    ZeroPercentage() : Error("percentages must be positive") {}
};
struct UnknownGroupValue : Error {
    using Error::Error;
};
struct IncompleteTable : Error {
    using Error::Error;
};
struct TooManyMalformedRows : Error {
    using Error::Error;
};
struct EmptyInput : Error {
    EmptyInput() : Error("input contains no records") {}
};

inline constexpr double kSumTolerance = 1e-9;

// Ordered group labels plus the population distribution alpha.
// Group order is fixed here; every vector in the library aligns to it.
class GroupSpace {
  public:
    GroupSpace(std::vector<std::string> labels, std::vector<double> alpha);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& alpha() const { return alpha_; }
    std::size_t size() const { return labels_.size(); }
    double min_alpha() const { return min_alpha_; }

    // Index of a label; throws UnknownGroupValue if absent.
    std::size_t index_of(const std::string& label) const;
    std::optional<std::size_t> find(const std::string& label) const;

  private:
    std::vector<std::string> labels_;
    std::vector<double> alpha_;
    double min_alpha_;
};

// One individual's connection counts per group, aligned to a GroupSpace.
struct ContactProfile {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
};

// Returns counts_i / total; throws ZeroContacts when total == 0.
std::vector<double> proportions(const ContactProfile& profile);

struct Individual {
    std::string id;
    std::optional<std::string> own_group;
    ContactProfile profile;
    std::map<std::string, std::string> attributes;
};

struct IndexRecord {
    std::string id;
    std::string group;
    double isi = 0.0;
    double iii = 0.0;
    double obi = 0.0;
};

// Symmetric edge-fraction matrix. fraction(i,j) is the share of all edges
// with one endpoint in group i and the other in group j; within-group
// edges count once. Upper triangle incl. diagonal sums to 1.
struct MixingMatrix {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> group_sizes;   // node counts
    std::vector<std::vector<double>> edge_fractions;
    std::uint64_t total_edges = 0;

    std::size_t size() const { return labels.size(); }
    void validate() const;

    // Collapses to a 2-group {group, rest} matrix. Identity for 2 groups
    // when `group` is the first label.
    MixingMatrix one_vs_rest(const std::string& group) const;
};

struct GroupReport {
    std::string group;
    std::uint64_t member_count = 0;
    std::optional<double> mean_isi;
    std::optional<double> mean_iii;
    std::optional<double> mean_obi;
    std::vector<double> obi_histogram;  // bin masses over [-1,1], sum 1
    std::optional<double> fsi;
    std::optional<double> hi;
};

}  // namespace segmetrics
