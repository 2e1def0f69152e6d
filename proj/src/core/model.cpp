#include "deptstats/core/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "deptstats/core/errors.hpp"
#include "deptstats/core/text.hpp"

namespace deptstats {

namespace {

// Half-up rounding of value * scale to an integer, value non-negative.
__int128 scaled_half_up(const Ratio &value, std::int64_t scale) {
    if (value.numerator() < 0)
        throw DomainError("cannot render negative ratio");
    const __int128 num = value.numerator();
    const __int128 den = value.denominator();
    return (num * scale * 2 + den) / (den * 2);
}

std::string int128_to_string(__int128 v) {
    if (v == 0)
        return "0";
    std::string digits;
    while (v > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::string render_hundredths(__int128 hundredths) {
    std::string fraction = int128_to_string(hundredths % 100);
    if (fraction.size() < 2)
        fraction.insert(0, "0");
    return int128_to_string(hundredths / 100) + "." + fraction;
}

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
        throw ValidationError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

constexpr std::array kRankNames{std::pair{AcademicRank::Professor, std::string_view("Professor")},
                                std::pair{AcademicRank::AssociateProfessor, std::string_view("AssociateProfessor")},
                                std::pair{AcademicRank::AssistantProfessor, std::string_view("AssistantProfessor")},
                                std::pair{AcademicRank::Lecturer, std::string_view("Lecturer")},
                                std::pair{AcademicRank::ProbationaryAssistantProfessor,
                                          std::string_view("ProbationaryAssistantProfessor")}};

} // namespace

std::string render_fixed2(const Ratio &value) {
    return render_hundredths(scaled_half_up(value, 100));
}

std::string render_percent(const Ratio &rate) {
    return render_hundredths(scaled_half_up(rate, 10000)) + "%";
}

AuthorId AuthorId::parse(std::string_view token) {
    const auto colon = token.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("author id '" + std::string(token) + "' is not of the form provider:value");
    AuthorId id{std::string(trim(token.substr(0, colon))), std::string(trim(token.substr(colon + 1)))};
    if (id.provider.empty() || id.value.empty())
        throw ValidationError("author id '" + std::string(token) + "' has an empty provider or value");
    return id;
}

std::string_view to_string(UnitKind kind) {
    switch (kind) {
    case UnitKind::Department:
        return "Department";
    case UnitKind::School:
        return "School";
    case UnitKind::Faculty:
        return "Faculty";
    }
    return "Department";
}

std::string_view to_string(AcademicRank rank) {
    for (const auto &[value, name] : kRankNames)
        if (value == rank)
            return name;
    return "Professor";
}

std::string_view to_string(ProfileStatus status) {
    switch (status) {
    case ProfileStatus::Resolved:
        return "Resolved";
    case ProfileStatus::NotFound:
        return "NotFound";
    case ProfileStatus::PendingReview:
        return "PendingReview";
    }
    return "PendingReview";
}

UnitKind parse_unit_kind(std::string_view text) {
    if (text == "Department")
        return UnitKind::Department;
    if (text == "School")
        return UnitKind::School;
    if (text == "Faculty")
        return UnitKind::Faculty;
    throw ValidationError("unknown unit kind '" + std::string(text) + "'");
}

AcademicRank parse_rank(std::string_view text) {
    // Accept "Associate Professor" as well as "AssociateProfessor".
    std::string compact;
    for (const char c : text)
        if (c != ' ' && c != '_' && c != '-')
            compact.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (const auto &[value, name] : kRankNames) {
        std::string lowered(name);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
        if (lowered == compact)
            return value;
    }
    throw ValidationError("unknown rank '" + std::string(text) + "'");
}

ProfileStatus parse_profile_status(std::string_view text) {
    if (text == "Resolved")
        return ProfileStatus::Resolved;
    if (text == "NotFound")
        return ProfileStatus::NotFound;
    if (text == "PendingReview")
        return ProfileStatus::PendingReview;
    throw ValidationError("unknown profile status '" + std::string(text) + "'");
}

UnitKind infer_unit_kind(std::string_view department_name) {
    const std::string folded = fold(department_name);
    if (folded.starts_with("school"))
        return UnitKind::School;
    if (folded.starts_with("faculty"))
        return UnitKind::Faculty;
    return UnitKind::Department;
}

bool FacultyMember::has_author(const AuthorId &id) const {
    return std::find(author_ids.begin(), author_ids.end(), id) != author_ids.end();
}

void validate(const Publication &publication, int current_year) {
    if (publication.doc_id.empty())
        throw ValidationError("publication without doc_id");
    if (publication.citation_count < 0)
        throw ValidationError("publication " + publication.doc_id + " has a negative citation_count");
    if (publication.author_ids.empty())
        throw ValidationError("publication " + publication.doc_id + " has no authors");
    if (publication.year < 1800 || publication.year > current_year + 1)
        throw ValidationError("publication " + publication.doc_id + " has implausible year " +
                              std::to_string(publication.year));
}

YearWindow::YearWindow(int start_year, int end_year) : start_(start_year), end_(end_year) {
    if (start_year > end_year)
        throw ValidationError("year window start " + std::to_string(start_year) + " is after end " +
                              std::to_string(end_year));
}

YearWindow YearWindow::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("year window must look like 2017:2021, got '" + std::string(text) + "'");
    return YearWindow(parse_int(trim(text.substr(0, colon)), "start year"),
                      parse_int(trim(text.substr(colon + 1)), "end year"));
}

std::string YearWindow::str() const {
    return std::to_string(start_) + ":" + std::to_string(end_);
}

Ratio missing_profile_rate(std::span<const FacultyMember> members) {
    if (members.empty())
        throw DomainError("no faculty");
    const auto not_found = std::count_if(members.begin(), members.end(), [](const FacultyMember &m) {
        return m.profile_status == ProfileStatus::NotFound;
    });
    return Ratio(static_cast<std::int64_t>(not_found), static_cast<std::int64_t>(members.size()));
}

std::string slugify(std::string_view text) {
    std::string slug;
    bool pending_dash = false;
    for (const char c : fold(text)) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (keep) {
            if (pending_dash && !slug.empty())
                slug.push_back('-');
            slug.push_back(c);
            pending_dash = false;
        } else {
            pending_dash = true;
        }
    }
    if (slug.empty() && !text.empty()) {
        // Nothing ASCII survived folding (e.g. a Greek-only name): fall back
        // to a stable FNV-1a digest of the raw bytes.
        std::uint64_t hash = 14695981039346656037ull;
        for (const unsigned char c : text) {
            hash ^= c;
            hash *= 1099511628211ull;
        }
        static constexpr char kHex[] = "0123456789abcdef";
        slug = "u";
        for (int shift = 60; shift >= 0; shift -= 4)
            slug.push_back(kHex[(hash >> shift) & 0xF]);
    }
    return slug;
}

} // namespace deptstats
