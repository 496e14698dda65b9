#ifndef STORYLINE_MODEL_HPP
#define STORYLINE_MODEL_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "storyline/drawing.hpp"
#include "storyline/instance.hpp"

namespace storyline {

enum class formulation { lin, qdr, plo };

std::string_view to_string(formulation f);
/// Accepts "lin", "qdr", "plo" (any case). Throws std::invalid_argument.
formulation parse_formulation(std::string_view s);

enum class var_kind : std::uint8_t { ordering, crossing };

/// x_{layer,u,v} (u above v) or y_{layer,u,v} (u and v swap between layer
/// and layer+1). Only u < v is ever materialised; x_{layer,v,u} is 1 - x_{layer,u,v}.
struct var_id {
    var_kind kind;
    int layer;
    char_id u;
    char_id v;

    bool operator==(const var_id &) const = default;
};

enum class sense : std::uint8_t { le, eq, ge };

enum class row_tag : std::uint8_t { tree, cr, lop, prop_r1, prop_r2, prop_i, sbc1, sbc2, fix };
inline constexpr std::size_t row_tag_count = 9;
std::string_view to_string(row_tag tag);

struct lin_term {
    double coef;
    int var;

    bool operator==(const lin_term &) const = default;
};

struct lin_constraint {
    std::vector<lin_term> terms;
    sense cmp = sense::le;
    double rhs = 0;
    row_tag tag = row_tag::tree;
    bool lazy = false;

    /// Left-hand side evaluated at `values`.
    double activity(std::span<const double> values) const;
    /// Amount by which `values` violate the row (0 when satisfied).
    double violation(std::span<const double> values) const;

    bool operator==(const lin_constraint &) const = default;
};

struct quad_term {
    double coef;
    int a;
    int b;
};

/// A possibly complemented ordering variable: value = negated ? 1 - x : x.
struct literal {
    int var;
    bool negated;
};

/// Linear expression over literals; complements fold into the constant.
class linear_expr {
   public:
    linear_expr &add(double coef, literal lit);
    linear_expr &add(double coef, int var);
    linear_expr &add_constant(double c) {
        constant_ += c;
        return *this;
    }
    /// Builds `expr <sense> rhs` with the constant moved to the right-hand side.
    lin_constraint make(sense s, double rhs, row_tag tag, bool lazy = false) const;

   private:
    std::vector<lin_term> terms_;
    double constant_ = 0;
};

/// Per-layer LOP rows, generated on demand. A full layer keeps every triple
/// of active characters; a reduced layer keeps triples made of two
/// outsiders and the representative, plus (unless propagated) the
/// triples inside the interaction.
class lop_family {
   public:
    struct layer_rule {
        bool reduced = false;
        char_id representative = -1;
        std::vector<char_id> outside;  ///< active, not in the interaction (ascending)
        std::vector<char_id> inside;   ///< interaction members (ascending)
        bool inside_propagated = false;
    };

    lop_family() = default;
    explicit lop_family(const std::vector<std::vector<char_id>> &active);

    const layer_rule &rule(int layer) const { return rules_.at(layer); }
    void set_rule(int layer, layer_rule r) { rules_.at(layer) = std::move(r); }
    int num_layers() const { return static_cast<int>(rules_.size()); }

    /// Calls f(a, b, c) with a < b < c for every kept triple of `layer`.
    template <class F>
    void for_each_triple(int layer, F &&f) const;

    std::int64_t triple_count(int layer) const;
    /// Two rows per kept triple.
    std::int64_t row_count(int layer) const { return 2 * triple_count(layer); }
    std::int64_t row_count() const;

   private:
    std::vector<std::vector<char_id>> active_;
    std::vector<layer_rule> rules_;
};

struct model_stats {
    int ordering_vars = 0;
    int crossing_vars = 0;
    std::array<std::int64_t, row_tag_count> rows{};  ///< materialised rows per tag
    std::int64_t lop_rows = 0;                       ///< rows the LOP generator can emit
    int quadratic_terms = 0;

    std::int64_t rows_of(row_tag t) const { return rows[static_cast<std::size_t>(t)]; }
};

/// Formulation-agnostic integer program over projected variables.
class ilp_model {
   public:
    ilp_model(const instance &inst, formulation form);

    const instance &inst() const noexcept { return inst_; }
    formulation form() const noexcept { return form_; }
    bool has_sbc() const noexcept { return sbc_; }

    int num_vars() const noexcept { return static_cast<int>(vars_.size()); }
    const std::vector<var_id> &vars() const noexcept { return vars_; }
    const std::vector<double> &objective() const noexcept { return objective_; }
    double objective_offset() const noexcept { return offset_; }
    const std::vector<quad_term> &quadratic() const noexcept { return quadratic_; }
    const std::vector<lin_constraint> &rows() const noexcept { return rows_; }
    const lop_family &lop() const noexcept { return lop_; }

    /// Column of x_{layer,u,v} with u < v, or -1 if either is inactive.
    int ordering_var(int layer, char_id u, char_id v) const;
    /// Column of y_{gap,u,v} with u < v, or -1.
    int crossing_var(int gap, char_id u, char_id v) const;
    /// x_{layer,a,b} for a != b, complemented when a > b.
    literal order(int layer, char_id a, char_id b) const;
    /// Value of x_{layer,a,b} under `values`.
    double order_value(std::span<const double> values, int layer, char_id a, char_id b) const;

    /// Active characters of `layer`, ascending.
    const std::vector<char_id> &layer_chars(int layer) const { return layer_chars_.at(layer); }

    /// The two rows of triple a < b < c: index 0 is x_ab + x_bc - x_ac <= 1,
    /// index 1 is x_ab + x_bc - x_ac >= 0.
    lin_constraint lop_row(int layer, char_id a, char_id b, char_id c, int which) const;

    /// Objective value (linear + quadratic) of `values`.
    double evaluate(std::span<const double> values) const;

    /// Column values representing a drawing (crossing vars included).
    std::vector<double> encode(const drawing &d) const;

    model_stats stats() const;

    // construction
    void add_row(lin_constraint row) { rows_.push_back(std::move(row)); }
    void add_objective(int var, double coef) { objective_.at(var) += coef; }
    void add_objective_constant(double c) { offset_ += c; }
    void add_quadratic(double coef, int a, int b) { quadratic_.push_back({coef, a, b}); }
    void set_lop_rule(int layer, lop_family::layer_rule r) { lop_.set_rule(layer, std::move(r)); }
    void mark_sbc() { sbc_ = true; }
    int add_crossing_vars();

   private:
    instance inst_;
    formulation form_;
    bool sbc_ = false;
    std::vector<var_id> vars_;
    std::vector<double> objective_;
    double offset_ = 0;
    std::vector<quad_term> quadratic_;
    std::vector<lin_constraint> rows_;
    lop_family lop_;

    std::vector<std::vector<char_id>> layer_chars_;
    std::vector<std::vector<int>> local_;  // local_[layer][c] = index in layer_chars_ or -1
    std::vector<int> x_offset_;
    std::vector<std::vector<char_id>> gap_chars_;
    std::vector<std::vector<int>> gap_local_;
    std::vector<int> y_offset_;
};

/// Linearised model: ordering, crossing, TREE, CR and (lazy) LOP rows.
ilp_model build_lin(const instance &inst);
/// Quadratic model: LIN without crossing variables, objective x_i + x_i+1 - 2 x_i x_i+1 per pair.
ilp_model build_qdr(const instance &inst);
/// Propagated linear order: LIN with LOP reduced on eligible layers plus PROP rows.
ilp_model build_plo(const instance &inst);

/// Smallest member of the interaction.
char_id representative_char(const interaction &inter);

/// True if PLO reduces the LOP rows of `layer`: one interaction there and
/// every character starting at `layer` takes part in it.
bool plo_eligible(const instance &inst, int layer);

/// Appends SBC-1 and SBC-2 equalities. Throws std::invalid_argument when
/// the model was built from a different instance.
ilp_model add_sbc(const instance &inst, ilp_model model);

ilp_model build_model(const instance &inst, formulation form, bool sbc);

/// Fixes every ordering variable of `layer` to the order of `perm`.
void pin_layer(ilp_model &model, int layer, const permutation &perm);

/// Where write_lp puts the LOP rows.
enum class lp_lop_rows {
    lazy,         ///< "Lazy Constraints" section
    constraints,  ///< ordinary rows, for readers without lazy support
    omit,
};

/// Writes the model in CPLEX LP text format.
void write_lp(std::ostream &os, const ilp_model &model, lp_lop_rows lop = lp_lop_rows::lazy);

std::string var_name(const ilp_model &model, int var);

// ---------------------------------------------------------------------------

template <class F>
void lop_family::for_each_triple(int layer, F &&f) const {
    const auto &r = rules_.at(layer);
    if (!r.reduced) {
        const auto &a = active_[layer];
        const std::size_t k = a.size();
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                for (std::size_t l = j + 1; l < k; ++l) f(a[i], a[j], a[l]);
        return;
    }
    const auto &o = r.outside;
    const char_id w = r.representative;
    for (std::size_t i = 0; i < o.size(); ++i)
        for (std::size_t j = i + 1; j < o.size(); ++j) {
            std::array<char_id, 3> t{o[i], o[j], w};
            std::sort(t.begin(), t.end());
            f(t[0], t[1], t[2]);
        }
    if (!r.inside_propagated) {
        const auto &in = r.inside;
        for (std::size_t i = 0; i < in.size(); ++i)
            for (std::size_t j = i + 1; j < in.size(); ++j)
                for (std::size_t l = j + 1; l < in.size(); ++l) f(in[i], in[j], in[l]);
    }
}

}  // namespace storyline

#endif  // STORYLINE_MODEL_HPP
