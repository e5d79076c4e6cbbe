#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvq/ast.hpp"
#include "dvq/schema.hpp"

namespace dvq {

/// Positioned syntax error. line/column are 1-based and point at the
/// offending token (or at end of input).
struct ParseError {
  std::string message;
  size_t line = 1;
  size_t column = 1;
  std::string token;

  std::string to_string() const {
    std::string out = "line " + std::to_string(line) + ", col " + std::to_string(column) +
                      ": " + message;
    if (!token.empty()) out += " (at '" + token + "')";
    return out;
  }
};

struct ParseResult {
  std::optional<DvqAst> ast;
  std::optional<ParseError> error;

  bool ok() const { return ast.has_value(); }
};

/// Same outcome shape for a bare SQL core (seed queries carry no
/// Visualize prefix and no BIN clause).
struct SqlParseResult {
  std::optional<SqlCore> core;
  std::optional<ParseError> error;

  bool ok() const { return core.has_value(); }
};

namespace detail {

enum class TokenType {
  Ident,        // bare identifier
  QuotedIdent,  // "..." (identifier or string literal, by position)
  SingleQuoted, // '...' (always a string literal)
  Number,
  Symbol,       // punctuation and comparison operators
  End,
};

struct Token {
  TokenType type = TokenType::End;
  std::string text;   // unescaped content for quoted tokens
  std::string raw;    // original spelling, for error messages
  size_t line = 1;
  size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view input) : input_(input) {}

  Token next() {
    skip_ws();
    Token tok;
    tok.line = line_;
    tok.column = col_;
    if (pos_ >= input_.size()) {
      tok.type = TokenType::End;
      tok.raw = "<end of input>";
      return tok;
    }
    char c = input_[pos_];
    if (c == '"' || c == '\'') return quoted(c);
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < input_.size() &&
         std::isdigit(static_cast<unsigned char>(input_[pos_ + 1])))) {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    return symbol();
  }

  bool failed() const { return failed_; }
  const ParseError& error() const { return error_; }

 private:
  void skip_ws() {
    while (pos_ < input_.size()) {
      char c = input_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  void advance(size_t n = 1) {
    pos_ += n;
    col_ += n;
  }

  Token quoted(char quote) {
    Token tok;
    tok.line = line_;
    tok.column = col_;
    tok.type = quote == '"' ? TokenType::QuotedIdent : TokenType::SingleQuoted;
    size_t start = pos_;
    advance();  // opening quote
    std::string content;
    while (pos_ < input_.size()) {
      char c = input_[pos_];
      if (c == '\n') break;  // quoted tokens never span lines
      if (c == quote) {
        if (pos_ + 1 < input_.size() && input_[pos_ + 1] == quote) {
          content.push_back(quote);  // doubled quote escapes itself
          advance(2);
          continue;
        }
        advance();
        tok.text = std::move(content);
        tok.raw = std::string(input_.substr(start, pos_ - start));
        return tok;
      }
      content.push_back(c);
      advance();
    }
    failed_ = true;
    error_ = {"unterminated quoted token", tok.line, tok.column,
              std::string(input_.substr(start, std::min<size_t>(pos_ - start, 20)))};
    tok.type = TokenType::End;
    return tok;
  }

  Token number() {
    Token tok;
    tok.line = line_;
    tok.column = col_;
    tok.type = TokenType::Number;
    size_t start = pos_;
    while (pos_ < input_.size() &&
           std::isdigit(static_cast<unsigned char>(input_[pos_]))) {
      advance();
    }
    if (pos_ < input_.size() && input_[pos_] == '.') {
      advance();
      while (pos_ < input_.size() &&
             std::isdigit(static_cast<unsigned char>(input_[pos_]))) {
        advance();
      }
    }
    if (pos_ < input_.size() && (input_[pos_] == 'e' || input_[pos_] == 'E')) {
      size_t mark = pos_;
      advance();
      if (pos_ < input_.size() && (input_[pos_] == '+' || input_[pos_] == '-')) advance();
      if (pos_ < input_.size() &&
          std::isdigit(static_cast<unsigned char>(input_[pos_]))) {
        while (pos_ < input_.size() &&
               std::isdigit(static_cast<unsigned char>(input_[pos_]))) {
          advance();
        }
      } else {
        // not an exponent after all; give back the 'e'
        col_ -= pos_ - mark;
        pos_ = mark;
      }
    }
    tok.text = tok.raw = std::string(input_.substr(start, pos_ - start));
    return tok;
  }

  Token ident() {
    Token tok;
    tok.line = line_;
    tok.column = col_;
    tok.type = TokenType::Ident;
    size_t start = pos_;
    while (pos_ < input_.size() &&
           (std::isalnum(static_cast<unsigned char>(input_[pos_])) ||
            input_[pos_] == '_')) {
      advance();
    }
    tok.text = tok.raw = std::string(input_.substr(start, pos_ - start));
    return tok;
  }

  Token symbol() {
    Token tok;
    tok.line = line_;
    tok.column = col_;
    tok.type = TokenType::Symbol;
    char c = input_[pos_];
    if ((c == '<' || c == '>' || c == '!') && pos_ + 1 < input_.size()) {
      char d = input_[pos_ + 1];
      if (d == '=' || (c == '<' && d == '>')) {
        tok.text = tok.raw = std::string{c, d};
        advance(2);
        return tok;
      }
    }
    tok.text = tok.raw = std::string(1, c);
    advance();
    return tok;
  }

  std::string_view input_;
  size_t pos_ = 0;
  size_t line_ = 1;
  size_t col_ = 1;
  bool failed_ = false;
  ParseError error_;
};

/// Recursive-descent parser for the visualization query grammar.
/// Keywords are matched case-insensitively; identifier and literal
/// spellings are preserved.
class Parser {
 public:
  explicit Parser(std::string_view input) : lexer_(input) { advance(); }

  ParseResult parse_dvq() {
    ParseResult result;
    DvqAst ast;
    if (!expect_keyword("VISUALIZE", "expected 'Visualize' at start of query")) {
      result.error = error_;
      return result;
    }
    if (!parse_chart_type(ast.chart)) {
      result.error = error_;
      return result;
    }
    if (!parse_sql_core(ast.core)) {
      result.error = error_;
      return result;
    }
    if (is_keyword("BIN")) {
      BinClause bin;
      advance();
      if (!parse_column_ref(bin.column)) {
        result.error = error_;
        return result;
      }
      if (!expect_keyword("BY", "expected BY after BIN column")) {
        result.error = error_;
        return result;
      }
      if (!parse_bin_unit(bin.unit)) {
        result.error = error_;
        return result;
      }
      ast.bin = std::move(bin);
    }
    if (current_.type != TokenType::End) {
      set_error("unexpected token after end of query");
      result.error = error_;
      return result;
    }
    if (ast.bin && !bin_column_used(ast)) {
      set_error_at(1, 1, "BIN column does not appear in SELECT or GROUP BY", "");
      result.error = error_;
      return result;
    }
    result.ast = std::move(ast);
    return result;
  }

  SqlParseResult parse_sql_only() {
    SqlParseResult result;
    SqlCore core;
    if (!parse_sql_core(core)) {
      result.error = error_;
      return result;
    }
    if (current_.type != TokenType::End) {
      set_error("unexpected token after end of query");
      result.error = error_;
      return result;
    }
    result.core = std::move(core);
    return result;
  }

 private:
  void advance() {
    current_ = lexer_.next();
    if (lexer_.failed() && !has_error_) {
      has_error_ = true;
      error_ = lexer_.error();
    }
  }

  bool is_keyword(std::string_view kw) const {
    return current_.type == TokenType::Ident && iequals(current_.text, kw);
  }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(kw)) return false;
    advance();
    return true;
  }

  bool expect_keyword(std::string_view kw, std::string_view msg) {
    if (has_error_) return false;
    if (!accept_keyword(kw)) return set_error(msg);
    return !has_error_;
  }

  bool is_symbol(std::string_view s) const {
    return current_.type == TokenType::Symbol && current_.text == s;
  }

  bool expect_symbol(std::string_view s, std::string_view msg) {
    if (has_error_) return false;
    if (!is_symbol(s)) return set_error(msg);
    advance();
    return true;
  }

  bool set_error(std::string_view message) {
    if (!has_error_) {
      has_error_ = true;
      error_ = {std::string(message), current_.line, current_.column, current_.raw};
    }
    return false;
  }

  void set_error_at(size_t line, size_t col, std::string_view message, std::string token) {
    if (!has_error_) {
      has_error_ = true;
      error_ = {std::string(message), line, col, std::move(token)};
    }
  }

  bool parse_chart_type(ChartType& out) {
    if (has_error_) return false;
    if (current_.type != TokenType::Ident) return set_error("expected a chart type");
    if (iequals(current_.text, "BAR")) out = ChartType::Bar;
    else if (iequals(current_.text, "PIE")) out = ChartType::Pie;
    else if (iequals(current_.text, "LINE")) out = ChartType::Line;
    else if (iequals(current_.text, "SCATTER")) out = ChartType::Scatter;
    else return set_error("unknown chart type; expected BAR, PIE, LINE, or SCATTER");
    advance();
    return true;
  }

  bool parse_bin_unit(BinUnit& out) {
    if (has_error_) return false;
    if (current_.type != TokenType::Ident) return set_error("expected a bin unit");
    if (iequals(current_.text, "YEAR")) out = BinUnit::Year;
    else if (iequals(current_.text, "MONTH")) out = BinUnit::Month;
    else if (iequals(current_.text, "DAY")) out = BinUnit::Day;
    else if (iequals(current_.text, "WEEKDAY")) out = BinUnit::Weekday;
    else return set_error("unknown bin unit; expected YEAR, MONTH, DAY, or WEEKDAY");
    advance();
    return true;
  }

  bool parse_sql_core(SqlCore& core) {
    if (!expect_keyword("SELECT", "expected SELECT")) return false;
    std::vector<SelectItem> items;
    if (!parse_select_item(items)) return false;
    while (is_symbol(",")) {
      advance();
      if (!parse_select_item(items)) return false;
    }
    if (items.size() != 2) {
      return set_error("SELECT must list exactly two items (x axis, y axis); got " +
                       std::to_string(items.size()));
    }
    core.select[0] = std::move(items[0]);
    core.select[1] = std::move(items[1]);

    if (!expect_keyword("FROM", "expected FROM after SELECT list")) return false;
    if (!parse_table_name(core.from)) return false;

    while (is_keyword("JOIN") || is_keyword("INNER")) {
      JoinClause join;
      if (accept_keyword("INNER")) {
        if (!expect_keyword("JOIN", "expected JOIN after INNER")) return false;
      } else {
        advance();  // JOIN
      }
      if (!parse_table_name(join.table)) return false;
      if (!expect_keyword("ON", "expected ON in join clause")) return false;
      if (!parse_column_ref(join.left)) return false;
      if (!expect_symbol("=", "join condition must be an equality")) return false;
      if (!parse_column_ref(join.right)) return false;
      core.joins.push_back(std::move(join));
    }

    if (accept_keyword("WHERE")) {
      if (!parse_condition_list(core.where)) return false;
    }
    if (is_keyword("GROUP")) {
      advance();
      if (!expect_keyword("BY", "expected BY after GROUP")) return false;
      ColumnRef ref;
      if (!parse_column_ref(ref)) return false;
      core.group_by.push_back(std::move(ref));
      while (is_symbol(",")) {
        advance();
        ColumnRef more;
        if (!parse_column_ref(more)) return false;
        core.group_by.push_back(std::move(more));
      }
    }
    if (accept_keyword("HAVING")) {
      if (!parse_condition_list(core.having)) return false;
    }
    if (is_keyword("ORDER")) {
      advance();
      if (!expect_keyword("BY", "expected BY after ORDER")) return false;
      if (!parse_order_item(core.order_by)) return false;
      while (is_symbol(",")) {
        advance();
        if (!parse_order_item(core.order_by)) return false;
      }
    }
    if (accept_keyword("LIMIT")) {
      if (current_.type != TokenType::Number) return set_error("expected a number after LIMIT");
      errno = 0;
      char* end = nullptr;
      long long v = std::strtoll(current_.text.c_str(), &end, 10);
      if (errno != 0 || end == current_.text.c_str() || *end != '\0' || v < 0) {
        return set_error("LIMIT must be a non-negative integer");
      }
      core.limit = v;
      advance();
    }
    return true;
  }

  bool parse_select_item(std::vector<SelectItem>& items) {
    if (has_error_) return false;
    if (current_.type == TokenType::Ident && peek_is_call()) {
      Aggregate agg;
      if (iequals(current_.text, "COUNT")) agg.func = AggFunc::Count;
      else if (iequals(current_.text, "SUM")) agg.func = AggFunc::Sum;
      else if (iequals(current_.text, "AVG")) agg.func = AggFunc::Avg;
      else if (iequals(current_.text, "MIN")) agg.func = AggFunc::Min;
      else if (iequals(current_.text, "MAX")) agg.func = AggFunc::Max;
      else return set_error("unknown aggregate function");
      advance();
      if (!expect_symbol("(", "expected ( after aggregate name")) return false;
      if (is_symbol("*")) {
        if (agg.func != AggFunc::Count) {
          return set_error("only COUNT may aggregate over *");
        }
        advance();
      } else {
        if (accept_keyword("DISTINCT")) {
          if (agg.func != AggFunc::Count) {
            return set_error("DISTINCT is only allowed inside COUNT");
          }
          agg.distinct = true;
        }
        ColumnRef ref;
        if (!parse_column_ref(ref)) return false;
        agg.column = std::move(ref);
      }
      if (!expect_symbol(")", "expected ) to close aggregate")) return false;
      items.emplace_back(std::move(agg));
      return true;
    }
    ColumnRef ref;
    if (!parse_column_ref(ref)) return false;
    items.emplace_back(std::move(ref));
    return true;
  }

  bool parse_order_item(std::vector<OrderItem>& out) {
    std::vector<SelectItem> exprs;
    if (!parse_select_item(exprs)) return false;
    OrderItem item;
    item.expr = std::move(exprs.back());
    if (accept_keyword("DESC")) item.descending = true;
    else if (accept_keyword("ASC")) item.descending = false;
    out.push_back(std::move(item));
    return true;
  }

  // Lookahead: does an identifier start a call like COUNT( ... )?
  bool peek_is_call() {
    if (current_.type != TokenType::Ident) return false;
    return iequals(current_.text, "COUNT") || iequals(current_.text, "SUM") ||
           iequals(current_.text, "AVG") || iequals(current_.text, "MIN") ||
           iequals(current_.text, "MAX");
  }

  bool parse_identifier(std::string& out, std::string_view what) {
    if (has_error_) return false;
    if (current_.type == TokenType::Ident || current_.type == TokenType::QuotedIdent) {
      if (current_.text.empty()) return set_error("empty identifier");
      out = current_.text;
      advance();
      return true;
    }
    return set_error("expected " + std::string(what));
  }

  bool parse_table_name(std::string& out) { return parse_identifier(out, "a table name"); }

  bool parse_column_ref(ColumnRef& out) {
    std::string first;
    if (!parse_identifier(first, "a column reference")) return false;
    if (is_symbol(".")) {
      advance();
      std::string second;
      if (!parse_identifier(second, "a column name after '.'")) return false;
      out.table = std::move(first);
      out.column = std::move(second);
    } else {
      out.table.reset();
      out.column = std::move(first);
    }
    return true;
  }

  bool parse_condition_list(std::vector<Condition>& out) {
    Condition cond;
    if (!parse_condition(cond)) return false;
    out.push_back(std::move(cond));
    while (is_keyword("AND")) {
      advance();
      Condition more;
      if (!parse_condition(more)) return false;
      out.push_back(std::move(more));
    }
    return true;
  }

  bool parse_condition(Condition& cond) {
    if (!parse_column_ref(cond.column)) return false;
    if (current_.type == TokenType::Symbol) {
      const std::string& s = current_.text;
      if (s == "=") cond.op = CompareOp::Eq;
      else if (s == "!=" || s == "<>") cond.op = CompareOp::Ne;
      else if (s == "<") cond.op = CompareOp::Lt;
      else if (s == ">") cond.op = CompareOp::Gt;
      else if (s == "<=") cond.op = CompareOp::Le;
      else if (s == ">=") cond.op = CompareOp::Ge;
      else return set_error("expected a comparison operator");
      advance();
    } else if (accept_keyword("LIKE")) {
      cond.op = CompareOp::Like;
    } else {
      return set_error("expected a comparison operator");
    }
    return parse_literal(cond.value);
  }

  bool parse_literal(Literal& out) {
    if (has_error_) return false;
    if (current_.type == TokenType::Number) {
      out = parse_number(current_.text);
      advance();
      return true;
    }
    if (is_symbol("-")) {
      advance();
      if (current_.type != TokenType::Number) return set_error("expected a number after '-'");
      out = -parse_number(current_.text);
      advance();
      return true;
    }
    if (current_.type == TokenType::QuotedIdent || current_.type == TokenType::SingleQuoted ||
        current_.type == TokenType::Ident) {
      out = current_.text;
      advance();
      return true;
    }
    return set_error("expected a literal value");
  }

  static double parse_number(const std::string& text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      value = std::strtod(text.c_str(), nullptr);
    }
    return value;
  }

  static bool bin_column_used(const DvqAst& ast) {
    const ColumnRef& target = ast.bin->column;
    auto matches = [&](const ColumnRef& ref) {
      if (!iequals(ref.column, target.column)) return false;
      if (!ref.table || !target.table) return true;  // unqualified matches loosely
      return iequals(*ref.table, *target.table);
    };
    for (const auto& item : ast.core.select) {
      if (const auto* col = std::get_if<ColumnRef>(&item)) {
        if (matches(*col)) return true;
      } else {
        const auto& agg = std::get<Aggregate>(item);
        if (agg.column && matches(*agg.column)) return true;
      }
    }
    for (const auto& key : ast.core.group_by) {
      if (matches(key)) return true;
    }
    return false;
  }

  Lexer lexer_;
  Token current_;
  bool has_error_ = false;
  ParseError error_;
};

}  // namespace detail

/// Parses one visualization query. Keywords are case-insensitive;
/// identifiers and literals keep their spelling. On failure the result
/// carries a positioned error instead of an AST.
inline ParseResult parse_dvq(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    ParseResult r;
    r.error = ParseError{"empty query", 1, 1, ""};
    return r;
  }
  detail::Parser parser(text);
  return parser.parse_dvq();
}

/// Parses a bare SQL core (no Visualize prefix, no BIN clause), the
/// shape seed queries arrive in.
inline SqlParseResult parse_sql_core(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    SqlParseResult r;
    r.error = ParseError{"empty query", 1, 1, ""};
    return r;
  }
  detail::Parser parser(text);
  return parser.parse_sql_only();
}

}  // namespace dvq
