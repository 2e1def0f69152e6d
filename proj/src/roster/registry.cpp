#include "deptstats/roster/registry.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/json_codec.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats::roster {

namespace fs = std::filesystem;

AuditLog::AuditLog(fs::path path, provider::Clock &clock) : path_(std::move(path)), clock_(clock) { }

void AuditLog::append(const std::string &operation, const nlohmann::json &before, const nlohmann::json &after) {
    if (path_.has_parent_path())
        fs::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out)
        throw Error("cannot open audit log " + path_.string());
    const nlohmann::json entry{
        {"timestamp", format_utc(clock_.now())}, {"operation", operation}, {"before", before}, {"after", after}};
    out << entry.dump() << '\n';
}

std::vector<nlohmann::json> AuditLog::entries() const {
    std::vector<nlohmann::json> entries;
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line))
        if (!trim(line).empty())
            entries.push_back(nlohmann::json::parse(line));
    return entries;
}

bool IngestDelta::empty() const {
    return institutions_created.empty() && departments_created.empty() && departments_updated.empty() &&
           members_created.empty() && members_updated.empty();
}

Registry::Registry(std::vector<Institution> institutions, std::vector<Department> departments,
                   std::vector<FacultyMember> members) {
    std::set<std::string> abbreviations;
    for (auto &institution : institutions) {
        if (!abbreviations.insert(institution.abbreviation).second)
            throw CorruptionError("duplicate institution abbreviation " + institution.abbreviation);
        institutions_.emplace(institution.id, std::move(institution));
    }
    for (auto &department : departments) {
        if (!institutions_.contains(department.institution_id))
            throw CorruptionError("department " + department.id + " references unknown institution");
        departments_.emplace(department.id, std::move(department));
    }
    for (auto &member : members) {
        if (!departments_.contains(member.department_id))
            throw CorruptionError("member " + member.id + " references unknown department");
        for (const auto &id : member.author_ids)
            if (!author_index_.emplace(id, member.id).second)
                throw CorruptionError("author id " + id.str() + " held by two members");
        members_.emplace(member.id, std::move(member));
    }
    recount();
}

void Registry::recount() {
    for (auto &[id, institution] : institutions_)
        institution.trs_count = 0;
    for (const auto &[id, member] : members_)
        ++institutions_.at(departments_.at(member.department_id).institution_id).trs_count;
}

IngestDelta Registry::ingest(const RosterFile &file, std::span<const InstitutionRecord> institution_list) {
    IngestDelta delta;
    if (file.rows.empty()) {
        delta.warnings.push_back("roster contains no member rows");
        for (const auto &[id, institution] : institutions_)
            delta.member_counts[institution.abbreviation] = institution.trs_count;
        return delta;
    }

    // Work on copies; commit only when every row validated.
    auto institutions = institutions_;
    auto departments = departments_;
    auto members = members_;

    std::map<std::string, const InstitutionRecord *> reference;
    for (const auto &record : institution_list)
        reference.emplace(record.abbreviation, &record);

    const auto institution_for = [&](const RosterRow &row) -> Institution & {
        for (auto &[id, institution] : institutions)
            if (institution.abbreviation == row.institution_abbrev)
                return institution;
        const auto ref = reference.find(row.institution_abbrev);
        if (ref == reference.end())
            throw RosterError(row.line, "unknown institution abbreviation '" + row.institution_abbrev + "'");
        Institution created{slugify(row.institution_abbrev), ref->second->name, row.institution_abbrev, 0};
        if (institutions.contains(created.id))
            throw RosterError(row.line, "institution id collision for '" + row.institution_abbrev + "'");
        delta.institutions_created.push_back(created);
        return institutions.emplace(created.id, created).first->second;
    };

    std::map<std::pair<std::string, std::string>, std::string> department_index; // (institution, name) -> id
    for (const auto &[id, department] : departments)
        department_index.emplace(std::pair{department.institution_id, department.name}, id);
    std::map<std::pair<std::string, std::string>, std::string> member_index; // (department, name) -> id
    for (const auto &[id, member] : members)
        member_index.emplace(std::pair{member.department_id, member.display_name}, id);

    const auto department_for = [&](const RosterRow &row, const Institution &institution) -> Department & {
        if (const auto it = department_index.find({institution.id, row.department_name}); it != department_index.end())
            return departments.at(it->second);
        const std::string base = institution.id + "-" + slugify(row.department_name);
        std::string id = base;
        for (int suffix = 2; departments.contains(id); ++suffix)
            id = base + "-" + std::to_string(suffix);
        Department created{id, institution.id, row.department_name, infer_unit_kind(row.department_name), {}};
        delta.departments_created.push_back(created);
        department_index.emplace(std::pair{institution.id, row.department_name}, id);
        return departments.emplace(id, created).first->second;
    };

    std::set<std::pair<std::string, std::string>> seen_rows;
    std::map<AuthorId, std::pair<std::string, std::size_t>> claimed; // author -> (member id, line)
    for (const auto &[id, member] : members)
        for (const auto &author : member.author_ids)
            claimed[author] = {id, 0};

    for (const auto &row : file.rows) {
        Institution &institution = institution_for(row);
        Department &department = department_for(row, institution);
        if (!seen_rows.emplace(department.id, row.member_display_name).second)
            throw RosterError(row.line, "duplicate member '" + row.member_display_name + "' in department '" +
                                            row.department_name + "'");

        FacultyMember *existing = nullptr;
        if (const auto it = member_index.find({department.id, row.member_display_name}); it != member_index.end())
            existing = &members.at(it->second);

        FacultyMember updated;
        if (existing) {
            updated = *existing;
        } else {
            const std::string base = department.id + "/" + slugify(row.member_display_name);
            updated.id = base;
            for (int suffix = 2; members.contains(updated.id); ++suffix)
                updated.id = base + "-" + std::to_string(suffix);
            updated.department_id = department.id;
            updated.display_name = row.member_display_name;
        }
        updated.rank = row.rank;

        // Ids released by this row may be claimed by later rows.
        for (const auto &author : updated.author_ids)
            if (std::find(row.author_ids.begin(), row.author_ids.end(), author) == row.author_ids.end())
                claimed.erase(author);
        std::vector<AuthorId> ids;
        for (const auto &author : row.author_ids) {
            if (std::find(ids.begin(), ids.end(), author) != ids.end())
                continue;
            const auto owner = claimed.find(author);
            if (owner != claimed.end() && owner->second.first != updated.id)
                throw RosterError(row.line, "author id " + author.str() + " is already claimed by member '" +
                                                owner->second.first + "'");
            claimed[author] = {updated.id, row.line};
            ids.push_back(author);
        }
        updated.author_ids = ids;
        if (!ids.empty())
            updated.profile_status = ProfileStatus::Resolved;
        else if (row.reviewed_not_found)
            updated.profile_status = ProfileStatus::NotFound;
        else
            updated.profile_status = ProfileStatus::PendingReview;
        // Merge records only make sense while both ids are attached.
        for (auto it = updated.merged_pairs.begin(); it != updated.merged_pairs.end();) {
            if (!updated.has_author(it->first) || !updated.has_author(it->second))
                it = updated.merged_pairs.erase(it);
            else
                ++it;
        }

        if (!existing) {
            delta.members_created.push_back(updated);
            member_index.emplace(std::pair{updated.department_id, updated.display_name}, updated.id);
            members.emplace(updated.id, updated);
        } else if (!(*existing == updated)) {
            delta.members_updated.push_back(updated);
            *existing = updated;
        }
    }

    institutions_ = std::move(institutions);
    departments_ = std::move(departments);
    members_ = std::move(members);
    author_index_.clear();
    for (const auto &[id, member] : members_)
        for (const auto &author : member.author_ids)
            author_index_.emplace(author, id);
    recount();
    for (const auto &[id, institution] : institutions_)
        delta.member_counts[institution.abbreviation] = institution.trs_count;
    for (auto &created : delta.institutions_created)
        created.trs_count = institutions_.at(created.id).trs_count;
    return delta;
}

std::size_t Registry::apply_tags(std::span<const TagRow> rows) {
    std::size_t changed = 0;
    for (const auto &row : rows) {
        const Institution *institution = find_institution(row.institution_abbrev);
        if (!institution)
            throw RosterError(row.line, "unknown institution abbreviation '" + row.institution_abbrev + "'");
        Department *target = nullptr;
        for (auto &[id, department] : departments_)
            if (department.institution_id == institution->id && department.name == row.department_name)
                target = &department;
        if (!target)
            throw RosterError(row.line, "unknown department '" + row.department_name + "'");
        const std::set<std::string> tags(row.tags.begin(), row.tags.end());
        if (target->thematic_tags != tags) {
            target->thematic_tags = tags;
            ++changed;
        }
    }
    return changed;
}

FacultyMember Registry::apply_merge(const std::string &member_id, const AuthorId &from, const AuthorId &into,
                                    AuditLog *audit) {
    const auto it = members_.find(member_id);
    if (it == members_.end())
        throw NotFoundError("unknown member '" + member_id + "'");
    FacultyMember &member = it->second;
    if (from == into)
        throw ValidationError("cannot merge " + from.str() + " into itself");
    for (const auto &id : {from, into})
        if (!member.has_author(id))
            throw ValidationError("author id " + id.str() + " is not attached to member '" + member_id + "'");

    const auto pair = from < into ? std::pair{from, into} : std::pair{into, from};
    if (member.merged_pairs.contains(pair))
        return member;
    const nlohmann::json before = member;
    member.merged_pairs.insert(pair);
    if (audit) {
        nlohmann::json after = member;
        after["merge"] = {{"from", from.str()}, {"into", into.str()}};
        audit->append("apply_merge", before, after);
    }
    return member;
}

FacultyMember Registry::mark_not_found(const std::string &member_id, AuditLog *audit) {
    const auto it = members_.find(member_id);
    if (it == members_.end())
        throw NotFoundError("unknown member '" + member_id + "'");
    FacultyMember &member = it->second;
    if (!member.author_ids.empty())
        throw ValidationError("member '" + member_id + "' already has author ids");
    if (member.profile_status == ProfileStatus::NotFound)
        return member;
    const nlohmann::json before = member;
    member.profile_status = ProfileStatus::NotFound;
    if (audit)
        audit->append("mark_not_found", before, member);
    return member;
}

std::vector<Institution> Registry::institutions() const {
    std::vector<Institution> out;
    for (const auto &[id, institution] : institutions_)
        out.push_back(institution);
    return out;
}

std::vector<Department> Registry::departments() const {
    std::vector<Department> out;
    for (const auto &[id, department] : departments_)
        out.push_back(department);
    return out;
}

std::vector<FacultyMember> Registry::members() const {
    std::vector<FacultyMember> out;
    for (const auto &[id, member] : members_)
        out.push_back(member);
    return out;
}

std::vector<FacultyMember> Registry::department_members(const std::string &department_id) const {
    std::vector<FacultyMember> out;
    for (const auto &[id, member] : members_)
        if (member.department_id == department_id)
            out.push_back(member);
    return out;
}

const Institution *Registry::find_institution(const std::string &id_or_abbreviation) const {
    if (const auto it = institutions_.find(id_or_abbreviation); it != institutions_.end())
        return &it->second;
    for (const auto &[id, institution] : institutions_)
        if (institution.abbreviation == id_or_abbreviation)
            return &institution;
    return nullptr;
}

const Department *Registry::find_department(const std::string &id) const {
    const auto it = departments_.find(id);
    return it == departments_.end() ? nullptr : &it->second;
}

std::vector<Department> Registry::find_departments_by_name(const std::string &name) const {
    const std::string needle = fold(name);
    std::vector<Department> out;
    for (const auto &[id, department] : departments_)
        if (id == name || fold(department.name) == needle)
            out.push_back(department);
    return out;
}

const FacultyMember *Registry::find_member(const std::string &id) const {
    const auto it = members_.find(id);
    return it == members_.end() ? nullptr : &it->second;
}

const FacultyMember *Registry::find_member_by_author(const AuthorId &id) const {
    const auto it = author_index_.find(id);
    return it == author_index_.end() ? nullptr : &members_.at(it->second);
}

} // namespace deptstats::roster
