#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace priming {

enum class Category : std::uint8_t {
    Person,
    SocialGroup,
    SocialControl,
    Institution,
    PhysicalEntity,
    ObjectNonedible,
    ObjectEdible,
    ObjectDrinkable,
    Clothing,
    Device,
    Container,
    Country,
};

inline constexpr std::size_t kCategoryCount = 12;

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

// Small value-type set of noun categories.
class CategorySet {
public:
    constexpr CategorySet() = default;
    CategorySet(std::initializer_list<Category> cats) {
        for (Category c : cats) insert(c);
    }

    void insert(Category c) { bits_ |= bit(c); }
    bool contains(Category c) const { return (bits_ & bit(c)) != 0; }
    bool empty() const { return bits_ == 0; }
    bool intersects(CategorySet other) const { return (bits_ & other.bits_) != 0; }
    bool subset_of(CategorySet other) const { return (bits_ & ~other.bits_) == 0; }
    std::vector<Category> members() const;
    std::string to_string() const;  // ';'-separated

    friend bool operator==(CategorySet, CategorySet) = default;

private:
    static constexpr std::uint16_t bit(Category c) {
        return static_cast<std::uint16_t>(1u << static_cast<unsigned>(c));
    }
    std::uint16_t bits_ = 0;
};

enum class Construction : std::uint8_t { ACT, PASS, DO, PO, INTR_PAD };
enum class Alternation : std::uint8_t { Transitive, Dative };
enum class Tense : std::uint8_t { Past, Present };
enum class Determiner : std::uint8_t { AAn, The };
enum class VerbKind : std::uint8_t { Transitive, Ditransitive, IntransitivePadding };
enum class Role : std::uint8_t { Agent, Patient, Recipient };

std::string_view to_string(Construction c);
std::string_view to_string(Alternation a);
std::string_view to_string(Tense t);
std::string_view to_string(Determiner d);
std::string_view to_string(VerbKind k);
std::string_view to_string(Role r);

std::optional<Construction> parse_construction(std::string_view s);
std::optional<Tense> parse_tense(std::string_view s);
std::optional<Determiner> parse_determiner(std::string_view s);
std::optional<VerbKind> parse_verb_kind(std::string_view s);
std::optional<Role> parse_role(std::string_view s);

// ACT<->PASS, DO<->PO. Throws std::invalid_argument for INTR_PAD.
Construction counterpart(Construction c);
Alternation alternation_of(Construction c);
bool is_dative(Construction c);

inline constexpr Construction kTargetStructures[] = {Construction::ACT, Construction::PASS, Construction::DO,
                                                     Construction::PO};

}  // namespace priming
