#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "deptstats/core/model.hpp"
#include "deptstats/provider/gateway.hpp"

namespace deptstats::roster {

// Weights of the merge evidence; they sum to 1 so scores land in [0,1].
struct MergePolicy {
    Ratio name_weight{35, 100};
    Ratio affiliation_weight{25, 100};
    Ratio coauthor_weight{30, 100};
    Ratio subject_weight{10, 100};
    Ratio accept_threshold{80, 100};
    // Shared co-authors at which the co-author component saturates at 1.
    std::int64_t coauthor_saturation = 3;
};

enum class EvidenceKind { NameVariantOverlap, AffiliationOverlap, CoauthorOverlap, SubjectAreaOverlap };
std::string_view to_string(EvidenceKind kind);

struct Evidence {
    EvidenceKind kind;
    Ratio strength; // component value in [0,1] before weighting
    std::string detail;

    bool operator==(const Evidence &) const = default;
};

struct MergeCandidate {
    std::string member_id;
    AuthorId profile_a; // the member's anchor profile
    AuthorId profile_b;
    Ratio score;
    std::vector<Evidence> evidence;

    bool operator==(const MergeCandidate &) const = default;
};

bool accepted(const MergeCandidate &candidate, const MergePolicy &policy);

// Co-author sets per author id, derived from publication author lists.
using CoauthorIndex = std::map<AuthorId, std::set<AuthorId>>;
CoauthorIndex build_coauthor_index(std::span<const Publication> publications);

// Scores every candidate profile against the member's anchor profile.
// Sorted by score descending, ties by candidate AuthorId ascending. The
// anchor itself, repeated candidates and pairs already merged are skipped.
// Throws PreconditionError when the anchor is not one of the member's ids.
std::vector<MergeCandidate> propose_merges(const FacultyMember &member, const provider::AuthorProfileRecord &anchor,
                                           std::span<const provider::AuthorProfileRecord> candidates,
                                           const CoauthorIndex &coauthors, const MergePolicy &policy = {});

enum class ContaminationReason { SubjectAreaOutlier, CoauthorDisjoint };
std::string_view to_string(ContaminationReason reason);

struct ContaminationFlag {
    std::string member_id;
    AuthorId author_id;
    std::vector<std::string> suspect_doc_ids;
    ContaminationReason reason;

    bool operator==(const ContaminationFlag &) const = default;
};

// Flags publications that look foreign to the member's profile: subjects
// disjoint from the modal subject cluster and co-authors disjoint from the
// cluster's co-authors. Advisory only; nothing is removed. Needs at least two
// publications to define a cluster.
std::vector<ContaminationFlag> flag_contamination(const FacultyMember &member,
                                                  std::span<const Publication> publications);

} // namespace deptstats::roster
