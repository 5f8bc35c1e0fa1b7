//! Predicate expressions used as property-constraint values.
//!
//! ```text
//! pred   := or ;  or := and { "or" and } ;  and := unary { "and" unary } ;
//! unary  := "not" unary | "(" pred ")" | atom ;
//! atom   := "=" literal | "!=" literal | "<" number | "<=" number
//!         | ">" number | ">=" number | "in" "{" literal {"," literal} "}"
//!         | "matches" string | "exists" ;
//! ```
//!
//! Evaluation is total: a comparison between mismatched types is `false`.

mod eval;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use regex::Regex;

use crate::model::{Ident, Number, Value};
use crate::syntax::{write_string, write_value};

pub use eval::{eval_predicate, EvalContext, InstanceOfFn};
pub use parse::parse_predicate;
pub(crate) use parse::predicate as parse_predicate_tokens;

/// A regular expression matched against the whole text value.
///
/// The dialect is the `regex` crate syntax: no backreferences or look-around,
/// linear-time matching.
#[derive(Clone, Debug)]
pub struct Pattern {
    source: String,
    regex: Regex,
}

impl Pattern {
    pub fn new(source: impl Into<String>) -> Result<Self, regex::Error> {
        let source = source.into();
        let regex = Regex::new(&format!("^(?:{source})$"))?;
        Ok(Pattern { source, regex })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_full_match(&self, text: &str) -> bool {
        self.regex.is_match(text)
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Eq for Pattern {}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.source.cmp(&other.source)
    }
}

impl Hash for Pattern {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.source.hash(state);
    }
}

/// Abstract syntax of a predicate. `And` / `Or` produced by the parser
/// always have at least two operands.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PredicateExpr {
    Eq(Value),
    Neq(Value),
    Lt(Number),
    Le(Number),
    Gt(Number),
    Ge(Number),
    In(BTreeSet<Value>),
    Matches(Pattern),
    Exists,
    /// `⊏ class`: the value is an object that is an instance of the class.
    /// Only used for arc endpoints; never written in source text.
    InstanceOfRef(Ident),
    And(Vec<PredicateExpr>),
    Or(Vec<PredicateExpr>),
    Not(Box<PredicateExpr>),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Or,
    And,
    Unary,
}

impl PredicateExpr {
    pub fn has_endpoint_ref(&self) -> bool {
        match self {
            PredicateExpr::InstanceOfRef(_) => true,
            PredicateExpr::And(xs) | PredicateExpr::Or(xs) => xs.iter().any(Self::has_endpoint_ref),
            PredicateExpr::Not(x) => x.has_endpoint_ref(),
            _ => false,
        }
    }

    /// A `src` / `dst` name inside an object literal, if any.
    pub(crate) fn first_reserved_literal_name(&self) -> Option<&Ident> {
        match self {
            PredicateExpr::Eq(v) | PredicateExpr::Neq(v) => v.first_reserved_name(),
            PredicateExpr::In(vs) => vs.iter().find_map(Value::first_reserved_name),
            PredicateExpr::And(xs) | PredicateExpr::Or(xs) => {
                xs.iter().find_map(Self::first_reserved_literal_name)
            }
            PredicateExpr::Not(x) => x.first_reserved_literal_name(),
            _ => None,
        }
    }

    fn level(&self) -> Level {
        match self {
            PredicateExpr::Or(_) => Level::Or,
            PredicateExpr::And(_) => Level::And,
            _ => Level::Unary,
        }
    }

    /// Operands at or below `bound` are parenthesised; an `and` directly
    /// inside an `and` must be, or the parser would flatten it.
    fn write(&self, out: &mut String, bound: Option<Level>) {
        let paren = bound.is_some_and(|b| self.level() <= b);
        if paren {
            out.push('(');
        }
        match self {
            PredicateExpr::Eq(v) => {
                out.push_str("= ");
                write_value(out, v);
            }
            PredicateExpr::Neq(v) => {
                out.push_str("!= ");
                write_value(out, v);
            }
            PredicateExpr::Lt(n) => out.push_str(&format!("< {n}")),
            PredicateExpr::Le(n) => out.push_str(&format!("<= {n}")),
            PredicateExpr::Gt(n) => out.push_str(&format!("> {n}")),
            PredicateExpr::Ge(n) => out.push_str(&format!(">= {n}")),
            PredicateExpr::In(vs) => {
                out.push_str("in {");
                for (i, v) in vs.iter().enumerate() {
                    out.push_str(if i == 0 { " " } else { ", " });
                    write_value(out, v);
                }
                out.push_str(" }");
            }
            PredicateExpr::Matches(p) => {
                out.push_str("matches ");
                write_string(out, p.source());
            }
            PredicateExpr::Exists => out.push_str("exists"),
            PredicateExpr::InstanceOfRef(c) => {
                out.push_str("instanceof ");
                out.push_str(c.as_str());
            }
            PredicateExpr::And(xs) | PredicateExpr::Or(xs) => {
                let (sep, child) = if matches!(self, PredicateExpr::And(_)) {
                    (" and ", Some(Level::And))
                } else {
                    (" or ", Some(Level::Or))
                };
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    x.write(out, child);
                }
            }
            PredicateExpr::Not(x) => {
                out.push_str("not ");
                x.write(out, Some(Level::And));
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for PredicateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, None);
        f.write_str(&s)
    }
}
