#include "deptstats/roster/disambiguation.hpp"

#include <algorithm>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::roster {

namespace {

// Folded, punctuation-free form: "Alpha, A." and "alpha a" compare equal.
std::string name_key(std::string_view name) {
    std::string key;
    bool space = false;
    for (const char c : fold(name)) {
        const bool word = std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
        if (word) {
            if (space && !key.empty())
                key.push_back(' ');
            key.push_back(c);
            space = false;
        } else {
            space = true;
        }
    }
    return key;
}

std::set<std::string> name_keys(const provider::AuthorProfileRecord &record) {
    std::set<std::string> keys;
    if (!record.indexed_name.empty())
        keys.insert(name_key(record.indexed_name));
    for (const auto &variant : record.name_variants)
        if (auto key = name_key(variant); !key.empty())
            keys.insert(std::move(key));
    return keys;
}

std::set<std::string> folded(const std::vector<std::string> &values) {
    std::set<std::string> out;
    for (const auto &value : values)
        if (auto f = fold(value); !f.empty())
            out.insert(std::move(f));
    return out;
}

std::vector<std::string> intersection(const std::set<std::string> &a, const std::set<std::string> &b) {
    std::vector<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

std::string_view to_string(EvidenceKind kind) {
    switch (kind) {
    case EvidenceKind::NameVariantOverlap:
        return "name-variant overlap";
    case EvidenceKind::AffiliationOverlap:
        return "affiliation overlap";
    case EvidenceKind::CoauthorOverlap:
        return "co-author overlap";
    case EvidenceKind::SubjectAreaOverlap:
        return "subject-area overlap";
    }
    return "";
}

std::string_view to_string(ContaminationReason reason) {
    return reason == ContaminationReason::SubjectAreaOutlier ? "SubjectAreaOutlier" : "CoauthorDisjoint";
}

bool accepted(const MergeCandidate &candidate, const MergePolicy &policy) {
    return candidate.score >= policy.accept_threshold;
}

CoauthorIndex build_coauthor_index(std::span<const Publication> publications) {
    CoauthorIndex index;
    for (const auto &publication : publications)
        for (const auto &author : publication.author_ids) {
            auto &coauthors = index[author];
            for (const auto &other : publication.author_ids)
                if (other != author)
                    coauthors.insert(other);
        }
    return index;
}

std::vector<MergeCandidate> propose_merges(const FacultyMember &member, const provider::AuthorProfileRecord &anchor,
                                           std::span<const provider::AuthorProfileRecord> candidates,
                                           const CoauthorIndex &coauthors, const MergePolicy &policy) {
    if (!member.has_author(anchor.author_id))
        throw PreconditionError("anchor profile " + anchor.author_id.str() + " is not attached to member '" +
                                member.id + "'");
    if (policy.coauthor_saturation < 1)
        throw ValidationError("coauthor_saturation must be at least 1");

    const auto anchor_names = name_keys(anchor);
    const auto anchor_affiliations = folded(anchor.affiliation_history);
    const auto anchor_subjects = folded(anchor.subject_areas);
    static const std::set<AuthorId> kNone;
    const auto coauthors_of = [&](const AuthorId &id) -> const std::set<AuthorId> & {
        const auto it = coauthors.find(id);
        return it == coauthors.end() ? kNone : it->second;
    };
    const auto &anchor_coauthors = coauthors_of(anchor.author_id);

    std::vector<MergeCandidate> proposals;
    std::set<AuthorId> seen;
    for (const auto &candidate : candidates) {
        const AuthorId &id = candidate.author_id;
        if (id == anchor.author_id || !seen.insert(id).second)
            continue;
        const auto pair = anchor.author_id < id ? std::pair{anchor.author_id, id} : std::pair{id, anchor.author_id};
        if (member.merged_pairs.contains(pair))
            continue;

        MergeCandidate proposal{member.id, anchor.author_id, id, Ratio(0), {}};
        const auto add = [&](EvidenceKind kind, const Ratio &weight, const Ratio &strength, std::string detail) {
            if (strength.numerator() == 0)
                return;
            proposal.score += weight * strength;
            proposal.evidence.push_back(Evidence{kind, strength, std::move(detail)});
        };

        if (const auto shared = intersection(anchor_names, name_keys(candidate)); !shared.empty())
            add(EvidenceKind::NameVariantOverlap, policy.name_weight, Ratio(1), join(shared, "; "));
        if (const auto shared = intersection(anchor_affiliations, folded(candidate.affiliation_history));
            !shared.empty())
            add(EvidenceKind::AffiliationOverlap, policy.affiliation_weight, Ratio(1), join(shared, "; "));

        std::vector<std::string> shared_coauthors;
        for (const auto &coauthor : coauthors_of(id))
            if (coauthor != anchor.author_id && coauthor != id && anchor_coauthors.contains(coauthor))
                shared_coauthors.push_back(coauthor.str());
        const auto shared_count = static_cast<std::int64_t>(shared_coauthors.size());
        add(EvidenceKind::CoauthorOverlap, policy.coauthor_weight,
            Ratio(std::min(shared_count, policy.coauthor_saturation), policy.coauthor_saturation),
            std::to_string(shared_count) + " shared: " + join(shared_coauthors, " "));

        if (const auto shared = intersection(anchor_subjects, folded(candidate.subject_areas)); !shared.empty())
            add(EvidenceKind::SubjectAreaOverlap, policy.subject_weight, Ratio(1), join(shared, "; "));

        proposals.push_back(std::move(proposal));
    }

    std::sort(proposals.begin(), proposals.end(), [](const MergeCandidate &a, const MergeCandidate &b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.profile_b < b.profile_b;
    });
    return proposals;
}

std::vector<ContaminationFlag> flag_contamination(const FacultyMember &member,
                                                  std::span<const Publication> publications) {
    std::vector<const Publication *> own;
    for (const auto &publication : publications)
        if (std::any_of(publication.author_ids.begin(), publication.author_ids.end(),
                        [&](const AuthorId &a) { return member.has_author(a); }))
            own.push_back(&publication);
    if (own.size() < 2)
        return {};

    std::map<std::string, int> subject_frequency;
    for (const auto *publication : own)
        for (const auto &subject : folded(publication->subject_areas))
            ++subject_frequency[subject];
    if (subject_frequency.empty())
        return {};
    // std::map iterates in key order, so ties go to the smallest subject.
    const auto modal = std::max_element(subject_frequency.begin(), subject_frequency.end(),
                                        [](const auto &a, const auto &b) { return a.second < b.second; })
                           ->first;

    std::set<std::string> cluster;
    std::set<AuthorId> cluster_coauthors;
    for (const auto *publication : own) {
        const auto subjects = folded(publication->subject_areas);
        if (!subjects.contains(modal))
            continue;
        cluster.insert(subjects.begin(), subjects.end());
        for (const auto &author : publication->author_ids)
            if (!member.has_author(author))
                cluster_coauthors.insert(author);
    }

    std::vector<ContaminationFlag> flags;
    for (const auto *publication : own) {
        const auto subjects = folded(publication->subject_areas);
        std::set<AuthorId> coauthors;
        for (const auto &author : publication->author_ids)
            if (!member.has_author(author))
                coauthors.insert(author);
        const bool coauthor_disjoint = std::none_of(coauthors.begin(), coauthors.end(),
                                                    [&](const AuthorId &a) { return cluster_coauthors.contains(a); });
        if (!coauthor_disjoint)
            continue;

        std::optional<ContaminationReason> reason;
        if (!subjects.empty()) {
            if (intersection(subjects, cluster).empty())
                reason = ContaminationReason::SubjectAreaOutlier;
        } else if (!coauthors.empty()) {
            reason = ContaminationReason::CoauthorDisjoint;
        }
        if (!reason)
            continue;
        const auto attributed = std::find_if(publication->author_ids.begin(), publication->author_ids.end(),
                                             [&](const AuthorId &a) { return member.has_author(a); });
        flags.push_back(ContaminationFlag{member.id, *attributed, {publication->doc_id}, *reason});
    }
    std::sort(flags.begin(), flags.end(), [](const ContaminationFlag &a, const ContaminationFlag &b) {
        return a.suspect_doc_ids < b.suspect_doc_ids;
    });
    return flags;
}

} // namespace deptstats::roster
