use std::cmp::Ordering;

use super::PredicateExpr;
use crate::model::{ClassGraph, ClassNode, Number, PropertyBag, Value};

/// Decides `bag ⊏ class`. Supplied by the membership layer.
pub type InstanceOfFn = fn(&PropertyBag, &ClassNode, &EvalContext<'_>) -> bool;

/// What an evaluation needs beyond the value itself: the schema that
/// endpoint predicates refer to, and how to decide instance-of.
#[derive(Clone, Copy)]
pub struct EvalContext<'a> {
    schema: Option<&'a ClassGraph>,
    instance_of: Option<InstanceOfFn>,
}

impl<'a> EvalContext<'a> {
    pub fn new(schema: &'a ClassGraph, instance_of: InstanceOfFn) -> Self {
        EvalContext {
            schema: Some(schema),
            instance_of: Some(instance_of),
        }
    }

    /// A context without a schema; endpoint predicates evaluate to `false`.
    pub fn detached() -> Self {
        EvalContext {
            schema: None,
            instance_of: None,
        }
    }

    pub fn schema(&self) -> Option<&'a ClassGraph> {
        self.schema
    }

    fn is_instance(&self, value: &Value, class: &str) -> bool {
        let (Some(schema), Some(instance_of), Value::Obj(bag)) = (self.schema, self.instance_of, value)
        else {
            return false;
        };
        schema
            .class(class)
            .is_some_and(|c| instance_of(bag, c, self))
    }
}

impl std::fmt::Debug for EvalContext<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvalContext")
            .field("has_schema", &self.schema.is_some())
            .finish()
    }
}

fn compare(value: &Value, bound: &Number, accept: fn(Ordering) -> bool) -> bool {
    value
        .as_number()
        .is_some_and(|n| accept(n.cmp_numeric(bound)))
}

/// Evaluates `p` on `v`. Never fails: mismatched types yield `false`, and
/// `!=` is the complement of `=`.
pub fn eval_predicate(p: &PredicateExpr, v: &Value, ctx: &EvalContext<'_>) -> bool {
    match p {
        PredicateExpr::Eq(x) => v.semantic_eq(x),
        PredicateExpr::Neq(x) => !v.semantic_eq(x),
        PredicateExpr::Lt(n) => compare(v, n, |o| o == Ordering::Less),
        PredicateExpr::Le(n) => compare(v, n, |o| o != Ordering::Greater),
        PredicateExpr::Gt(n) => compare(v, n, |o| o == Ordering::Greater),
        PredicateExpr::Ge(n) => compare(v, n, |o| o != Ordering::Less),
        PredicateExpr::In(set) => set.iter().any(|x| v.semantic_eq(x)),
        PredicateExpr::Matches(pattern) => match v {
            Value::Text(s) => pattern.is_full_match(s),
            _ => false,
        },
        PredicateExpr::Exists => true,
        PredicateExpr::InstanceOfRef(class) => ctx.is_instance(v, class),
        PredicateExpr::And(xs) => xs.iter().all(|x| eval_predicate(x, v, ctx)),
        PredicateExpr::Or(xs) => xs.iter().any(|x| eval_predicate(x, v, ctx)),
        PredicateExpr::Not(x) => !eval_predicate(x, v, ctx),
    }
}

impl PredicateExpr {
    pub fn eval(&self, v: &Value, ctx: &EvalContext<'_>) -> bool {
        eval_predicate(self, v, ctx)
    }
}
