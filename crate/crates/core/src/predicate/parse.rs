use std::collections::BTreeSet;

use super::{Pattern, PredicateExpr};
use crate::syntax::{number_literal, parse_literal, SyntaxError, TokenKind, Tokens};

const ATOM_START: &[&str] = &[
    "`=`", "`!=`", "`<`", "`<=`", "`>`", "`>=`", "`in`", "`matches`", "`exists`", "`not`", "`(`",
];

/// Parses a standalone predicate such as `>= 13 and < 18`.
pub fn parse_predicate(source: &str) -> Result<PredicateExpr, SyntaxError> {
    let mut tokens = Tokens::new(source, "<predicate>")?;
    let expr = predicate(&mut tokens)?;
    tokens.expect_eof().map_err(|_| tokens.error(&["`and`", "`or`", "end of input"]))?;
    Ok(expr)
}

/// Parses one predicate and leaves the cursor on the first token after it.
pub(crate) fn predicate(tokens: &mut Tokens) -> Result<PredicateExpr, SyntaxError> {
    let first = conjunction(tokens)?;
    if !tokens.at_word("or") {
        return Ok(first);
    }
    let mut operands = vec![first];
    while tokens.at_word("or") {
        tokens.next();
        operands.push(conjunction(tokens)?);
    }
    Ok(PredicateExpr::Or(operands))
}

fn conjunction(tokens: &mut Tokens) -> Result<PredicateExpr, SyntaxError> {
    let first = unary(tokens)?;
    if !tokens.at_word("and") {
        return Ok(first);
    }
    let mut operands = vec![first];
    while tokens.at_word("and") {
        tokens.next();
        operands.push(unary(tokens)?);
    }
    Ok(PredicateExpr::And(operands))
}

fn unary(tokens: &mut Tokens) -> Result<PredicateExpr, SyntaxError> {
    if tokens.at_word("not") {
        tokens.next();
        return Ok(PredicateExpr::Not(Box::new(unary(tokens)?)));
    }
    if tokens.eat(&TokenKind::LParen) {
        let inner = predicate(tokens)?;
        if !tokens.eat(&TokenKind::RParen) {
            return Err(tokens.error(&["`and`", "`or`", "`)`"]));
        }
        return Ok(inner);
    }
    atom(tokens)
}

fn atom(tokens: &mut Tokens) -> Result<PredicateExpr, SyntaxError> {
    let kind = tokens.peek().kind.clone();
    match kind {
        TokenKind::Eq => {
            tokens.next();
            Ok(PredicateExpr::Eq(parse_literal(tokens)?))
        }
        TokenKind::Neq => {
            tokens.next();
            Ok(PredicateExpr::Neq(parse_literal(tokens)?))
        }
        TokenKind::Lt | TokenKind::Le | TokenKind::Gt | TokenKind::Ge => {
            tokens.next();
            let n = number_literal(tokens)?;
            Ok(match kind {
                TokenKind::Lt => PredicateExpr::Lt(n),
                TokenKind::Le => PredicateExpr::Le(n),
                TokenKind::Gt => PredicateExpr::Gt(n),
                _ => PredicateExpr::Ge(n),
            })
        }
        TokenKind::Ident(w) if w == "exists" => {
            tokens.next();
            Ok(PredicateExpr::Exists)
        }
        TokenKind::Ident(w) if w == "in" => {
            tokens.next();
            tokens.expect(&TokenKind::LBrace, "`{`")?;
            let mut set = BTreeSet::new();
            set.insert(parse_literal(tokens)?);
            while tokens.eat(&TokenKind::Comma) {
                set.insert(parse_literal(tokens)?);
            }
            if !tokens.eat(&TokenKind::RBrace) {
                return Err(tokens.error(&["`,`", "`}`"]));
            }
            Ok(PredicateExpr::In(set))
        }
        TokenKind::Ident(w) if w == "matches" => {
            tokens.next();
            match &tokens.peek().kind {
                TokenKind::Str(s) => {
                    let pattern = Pattern::new(s.clone()).map_err(|e| SyntaxError {
                        span: tokens.peek().span.clone(),
                        message: format!("invalid pattern: {}", first_line(&e.to_string())),
                        expected: Vec::new(),
                    })?;
                    tokens.next();
                    Ok(PredicateExpr::Matches(pattern))
                }
                _ => Err(tokens.error(&["string"])),
            }
        }
        _ => Err(tokens.error(ATOM_START)),
    }
}

fn first_line(s: &str) -> &str {
    s.lines().last().unwrap_or(s).trim()
}
